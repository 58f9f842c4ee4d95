mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::all_types;
use etatrace::fraction::int;
use etatrace::rootdata::{RootDatum, Weight};

// Coxeter number, k and dim g, from the standard tables.
fn table(t: &str) -> (i64, i64, usize) {
    let (fam, l) = t.split_at(1);
    let l: i64 = l.parse().unwrap();
    match fam {
        "A" => (l + 1, 2 * (l + 1), (l * (l + 2)) as usize),
        "B" => (2 * l, 4 * l - 2, (l * (2 * l + 1)) as usize),
        "C" => (2 * l, 4 * l + 4, (l * (2 * l + 1)) as usize),
        "D" => (2 * l - 2, 4 * l - 4, (l * (2 * l - 1)) as usize),
        _ => match t {
            "E6" => (12, 24, 78),
            "E7" => (18, 36, 133),
            "E8" => (30, 60, 248),
            "F4" => (12, 18, 52),
            "G2" => (6, 24, 14),
            _ => unreachable!(),
        },
    }
}

#[test]
fn symmetrized_cartan_is_positive_definite() {
    for t in all_types() {
        let d = RootDatum::parse(&t).unwrap();
        let l = d.rank();
        for i in 0..l {
            for j in 0..l {
                assert_eq!(d.sym[i][j], d.sym[j][i], "{t}");
                assert_eq!(d.sym[i][j], d.d[i] * d.cartan[i][j], "{t}");
            }
        }
        assert!(d.leading_minors().iter().all(|m| *m > int(0)), "{t}");
    }
}

#[test]
fn type_constants() {
    for t in all_types() {
        let d = RootDatum::parse(&t).unwrap();
        let (h, k, dim) = table(&t);
        assert_eq!((d.h, d.k.clone()), (h, int(k)), "{t}");
        assert_eq!(&d.rg * int(d.h), d.k, "{t}");
        assert_eq!(d.dim_g(), dim, "{t}");
        assert_eq!(1 + d.highest_root().iter().sum::<i64>(), d.h, "{t}");
        assert_eq!(d.positive_roots.len() as i64 * 2, d.h * d.rank() as i64, "{t}");
    }
}

#[test]
fn coxeter_element_has_order_h() {
    for t in all_types() {
        let d = RootDatum::parse(&t).unwrap();
        let basis: Vec<Weight> = (0..d.rank()).map(|i| (0..d.rank()).map(|j| i64::from(i == j)).collect()).collect();
        let mut cur = basis.clone();
        for m in 1..=d.h {
            cur = cur.iter().map(|w| d.coxeter_action_on_weights(w)).collect();
            assert_eq!(cur == basis, m == d.h, "{t}: c^{m}");
        }
    }
}

/// Every element of W as an integer matrix on fundamental-weight coordinates.
fn weyl_group(d: &RootDatum) -> BTreeSet<Vec<Vec<i64>>> {
    let l = d.rank();
    let gens: Vec<Vec<Vec<i64>>> = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| (0..l).map(|k| i64::from(j == k) - i64::from(k == i) * d.cartan[j][i]).collect())
                .collect()
        })
        .collect();
    let id: Vec<Vec<i64>> = (0..l).map(|j| (0..l).map(|k| i64::from(j == k)).collect()).collect();
    let mut group = BTreeSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(g) = frontier.pop() {
        for s in &gens {
            let p: Vec<Vec<i64>> =
                (0..l).map(|r| (0..l).map(|c| (0..l).map(|k| s[r][k] * g[k][c]).sum()).collect()).collect();
            if group.insert(p.clone()) {
                frontier.push(p);
            }
        }
    }
    group
}

#[test]
fn weyl_group_orders() {
    for (t, order) in [("A1", 2), ("A2", 6), ("A3", 24), ("B2", 8), ("B3", 48), ("C3", 48), ("G2", 12)] {
        let d = RootDatum::parse(t).unwrap();
        assert_eq!(weyl_group(&d).len(), order, "{t}");
        assert_eq!(d.weyl_orbit(&d.rho).len(), order, "{t}");
    }
}

fn small_type() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["A1", "A2", "A3", "B2", "B3", "C3", "G2"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn strictly_dominant_orbits_are_free(t in small_type(), coords in prop::collection::vec(1i64..5, 3)) {
        let d = RootDatum::parse(t).unwrap();
        let w: Weight = coords[..d.rank()].to_vec();
        let group = weyl_group(&d);
        let explicit: BTreeSet<Weight> = group
            .iter()
            .map(|g| (0..d.rank()).map(|r| (0..d.rank()).map(|c| g[r][c] * w[c]).sum()).collect())
            .collect();
        prop_assert_eq!(explicit.len(), group.len());
        prop_assert_eq!(d.weyl_orbit(&w), explicit);
    }

    #[test]
    fn multiplicities_sum_to_weyl_dimension(t in small_type(), coords in prop::collection::vec(0i64..3, 3)) {
        let d = RootDatum::parse(t).unwrap();
        let w: Weight = coords[..d.rank()].to_vec();
        let mult = d.freudenthal_multiplicities(&w).unwrap();
        prop_assert_eq!(mult.values().sum::<u64>(), d.weyl_dim(&w).unwrap());
        prop_assert_eq!(mult.get(&w), Some(&1));
        // multiplicities are Weyl invariant
        for (mu, m) in &mult {
            for i in 0..d.rank() {
                prop_assert_eq!(mult.get(&d.reflect(i, mu)), Some(m));
            }
        }
    }
}

#[test]
fn contributing_weights_match_box_scan() {
    for (t, cutoffs) in [("A1", vec![1, 5, 30]), ("A2", vec![1, 4, 8]), ("A3", vec![5]), ("B2", vec![6]), ("G2", vec![5])] {
        let d = RootDatum::parse(t).unwrap();
        for c in cutoffs {
            let cut = int(c);
            let side = 40i64;
            let mut scan = Vec::new();
            let total = (side as usize).pow(d.rank() as u32);
            for idx in 0..total {
                let mut w = Vec::new();
                let mut r = idx;
                for _ in 0..d.rank() {
                    w.push((r % side as usize) as i64);
                    r /= side as usize;
                }
                if d.trace_exponent(&w).unwrap() < cut {
                    assert!(w.iter().all(|&x| x < side - 1), "{t}: scan box too small");
                    scan.push(w);
                }
            }
            scan.sort();
            assert_eq!(d.enumerate_contributing_weights(&cut).unwrap(), scan, "{t} cutoff {c}");
        }
    }
}

#[test]
fn dimension_enumeration_is_complete() {
    for t in ["A1", "A2", "B2", "G2"] {
        let d = RootDatum::parse(t).unwrap();
        let listed: BTreeSet<Weight> = d.dominant_weights_up_to_dim(200).unwrap().into_iter().collect();
        let mut scan = BTreeSet::new();
        for a in 0..200i64 {
            for b in 0..if d.rank() == 1 { 1 } else { 200 } {
                let w = if d.rank() == 1 { vec![a] } else { vec![a, b] };
                if d.weyl_dim(&w).unwrap() <= 200 {
                    scan.insert(w);
                }
            }
        }
        assert_eq!(listed, scan, "{t}");
    }
}

#[test]
fn known_dimensions() {
    let cases: [(&str, &[i64], u64); 9] = [
        ("A2", &[1, 1], 8),
        ("B2", &[1, 0], 5),
        ("B2", &[0, 1], 4),
        ("G2", &[1, 0], 7),
        ("G2", &[0, 1], 14),
        ("F4", &[1, 0, 0, 0], 52),
        ("F4", &[0, 0, 0, 1], 26),
        ("E6", &[1, 0, 0, 0, 0, 0], 27),
        ("E8", &[0, 0, 0, 0, 0, 0, 0, 1], 248),
    ];
    for (t, w, dim) in cases {
        assert_eq!(RootDatum::parse(t).unwrap().weyl_dim(w).unwrap(), dim, "{t} {w:?}");
    }
    for t in all_types() {
        let d = RootDatum::parse(&t).unwrap();
        let adj = d.root_to_weight(d.highest_root());
        assert_eq!(d.weyl_dim(&adj).unwrap() as usize, d.dim_g(), "{t}");
    }
}

#[test]
fn rejects_bad_input() {
    for bad in ["A0", "B1", "C1", "D2", "E9", "F5", "G3", "X2", ""] {
        assert!(RootDatum::parse(bad).is_err(), "{bad}");
    }
    let d = RootDatum::parse("a2").unwrap();
    assert!(d.check_dominant(&[1, -1]).is_err());
    assert!(d.check_dominant(&[1]).is_err());
}
