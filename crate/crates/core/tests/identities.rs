mod common;

use common::{dense, phi_product};
use etatrace::cache::ModuleCache;
use etatrace::fraction::{int, rat};
use etatrace::identities::{rhs_series, Engine, IdentityReport, SeriesValue};
use etatrace::qseries::{euler_phi, RatFunc};
use etatrace::rootdata::RootDatum;

fn strip_time(mut r: IdentityReport) -> IdentityReport {
    r.wall_time_ms = 0;
    r
}

#[test]
fn simply_laced_product_side() {
    for t in ["A1", "A2", "A3", "A4", "D4", "D5", "E6"] {
        let d = RootDatum::parse(t).unwrap();
        let cut = int(12);
        let expected = euler_phi(&int(2), &cut).unwrap().pow(d.dim_g() as i64).unwrap();
        assert_eq!(rhs_series(&d, &cut).unwrap(), expected, "{t}");
        assert_eq!(dense(&expected, 12), phi_product(&[2], d.dim_g(), 12), "{t}");
    }
}

#[test]
fn main_identity_small_cases() {
    let e = Engine::default();
    for (t, c) in [("A1", 40), ("A2", 5), ("B2", 4), ("C3", 2), ("G2", 3), ("B3", 2)] {
        let d = RootDatum::parse(t).unwrap();
        let r = e.verify_main_identity(&d, &int(c)).unwrap();
        assert!(r.matches, "{t}: {:?}", r.first_discrepancy);
        let SeriesValue::One(lhs) = &r.lhs else { panic!() };
        assert!(lhs.terms().all(|(_, c)| c.is_integer()), "{t}");
        assert!(r.terms.iter().all(|x| (-1..=1).contains(&x.epsilon)), "{t}");
    }
}

#[test]
fn classical_and_two_variable_small_cases() {
    let e = Engine::default();
    for (t, c) in [("A1", 20), ("A2", 3), ("B2", 2), ("G2", 2)] {
        let d = RootDatum::parse(t).unwrap();
        let k = e.verify_kostant_classical(&d, &int(c)).unwrap();
        assert!(k.matches, "{t}: {:?}", k.first_discrepancy);
        let tv = e.two_variable_series(&d, &int(c.min(3))).unwrap();
        assert!(tv.matches, "{t}: {:?}", tv.first_discrepancy);
    }
}

#[test]
fn weights_outside_the_root_lattice_have_zero_trace() {
    let e = Engine::default();
    for (t, w) in [("A2", vec![1, 0]), ("A2", vec![2, 0]), ("A1", vec![3]), ("B2", vec![0, 1]), ("A3", vec![1, 0, 0])] {
        let d = RootDatum::parse(t).unwrap();
        assert!(!d.in_root_lattice(&w));
        let detail = e.trace_detail(&d, &w).unwrap();
        assert_eq!(detail.trace, RatFunc::zero(), "{t} {w:?}");
        assert_eq!(detail.epsilon_classical, 0);
    }
}

#[test]
fn worked_traces() {
    let e = Engine::default();
    let cases: [(&str, &[i64], RatFunc); 4] = [
        ("A2", &[1, 1], RatFunc::monomial(-1, 2)),
        ("A1", &[0], RatFunc::one()),
        ("A1", &[4], RatFunc::q_pow(6)),
        ("A1", &[2], RatFunc::monomial(-1, 2)),
    ];
    for (t, w, expected) in cases {
        let d = RootDatum::parse(t).unwrap();
        assert_eq!(e.trace_detail(&d, w).unwrap().trace, expected, "{t} {w:?}");
    }
    let r = e.verify_main_identity(&RootDatum::parse("A2").unwrap(), &rat(1, 2)).unwrap();
    assert!(r.matches && r.terms.len() == 1);
}

#[test]
fn adjoint_theta_per_weight_space() {
    let d = RootDatum::parse("A2").unwrap();
    let r = Engine::default().verify_theta_scalars(&d, &[1, 1]).unwrap();
    assert!(r.pass() && r.weight_spaces_match() && r.theta_diagonal);
    assert_eq!(r.top_sign, Some(1));
    assert_eq!(r.zero_sign, Some(1));
}

#[test]
fn report_json_round_trips() {
    let e = Engine::default();
    let d = RootDatum::parse("B2").unwrap();
    for r in [
        e.verify_main_identity(&d, &int(3)).unwrap(),
        e.verify_kostant_classical(&d, &int(3)).unwrap(),
        e.two_variable_series(&d, &int(2)).unwrap(),
    ] {
        let text = serde_json::to_string(&r).unwrap();
        let back: IdentityReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}

#[test]
fn warm_cache_gives_identical_results() {
    let dir = tempfile::tempdir().unwrap();
    let cold = Engine::default();
    let cached = Engine::new(600, Some(ModuleCache::new(dir.path())));
    let d = RootDatum::parse("G2").unwrap();
    let reference = strip_time(cold.verify_main_identity(&d, &int(4)).unwrap());
    let first = strip_time(cached.verify_main_identity(&d, &int(4)).unwrap());
    let entries = std::fs::read_dir(dir.path()).unwrap().count();
    assert!(entries > 0);
    let second = strip_time(cached.verify_main_identity(&d, &int(4)).unwrap());
    assert_eq!(first, reference);
    assert_eq!(second, reference);

    // damage every entry: results are unchanged and the entries are rewritten
    for f in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::write(f.unwrap().path(), "{\"format_version\": 1}").unwrap();
    }
    assert_eq!(strip_time(cached.verify_main_identity(&d, &int(4)).unwrap()), reference);
    let w = d.enumerate_contributing_weights(&int(4)).unwrap().into_iter().find(|w| w.iter().any(|&x| x > 0)).unwrap();
    assert!(ModuleCache::new(dir.path()).load(&d, &w).is_some());
}

#[test]
fn thread_count_does_not_change_results() {
    let d = RootDatum::parse("A2").unwrap();
    let run = |n: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
        pool.install(|| strip_time(Engine::default().verify_main_identity(&d, &int(6)).unwrap()))
    };
    assert_eq!(run(1), run(4));
}
