use etatrace::braid;
use etatrace::linalg::rank;
use etatrace::qmodule::build_module;
use etatrace::qseries::RatFunc;
use etatrace::rootdata::{RootDatum, Weight};

fn modules(t: &str, max_dim: u64) -> (RootDatum, Vec<Weight>) {
    let d = RootDatum::parse(t).unwrap();
    let w = d.dominant_weights_up_to_dim(max_dim).unwrap();
    (d, w)
}

#[test]
fn s_maps_weight_spaces_isomorphically() {
    for (t, max_dim) in [("A1", 10), ("A2", 27), ("B2", 35), ("G2", 27), ("A3", 20)] {
        let (d, ws) = modules(t, max_dim);
        for w in ws {
            let m = build_module(&d, &w, 600).unwrap();
            for i in 0..d.rank() {
                let s = braid::s_operator(&m, i).unwrap();
                assert!(braid::respects_weights(&m, &s.matrix, |mu| d.reflect(i, mu)), "{t} {w:?} S{i}");
                for (mu, range) in m.weight_spaces() {
                    let cols: Vec<usize> = range.clone().collect();
                    let rows = m.weight_space_indices(&d.reflect(i, mu));
                    assert_eq!(rows.len(), cols.len());
                    let block = s.matrix.restrict(&rows, &cols).to_dense();
                    assert_eq!(rank(&block), cols.len(), "{t} {w:?} S{i} on {mu:?}");
                }
            }
        }
    }
}

#[test]
fn s_squared_on_strings() {
    for (t, max_dim) in [("A1", 12), ("A2", 27), ("B2", 35), ("G2", 27)] {
        let (d, ws) = modules(t, max_dim);
        for w in ws {
            let m = build_module(&d, &w, 600).unwrap();
            for i in 0..d.rank() {
                let s = braid::s_operator(&m, i).unwrap();
                let s2 = s.matrix.mul(&s.matrix).unwrap();
                for string in braid::istring_decompose(&m, i).unwrap() {
                    let n = string.n;
                    for (k, v) in string.vectors.iter().enumerate() {
                        let k = k as i64;
                        let sign = if n % 2 == 0 { 1 } else { -1 };
                        let scalar = RatFunc::monomial(sign, d.d[i] * (n + 2 * k * (n - k)));
                        let expected: std::collections::BTreeMap<usize, RatFunc> =
                            v.iter().map(|(&r, x)| (r, x * &scalar)).collect();
                        assert_eq!(s2.apply(v), expected, "{t} {w:?} i={i} n={n} k={k}");
                    }
                }
            }
        }
    }
}

#[test]
fn coxeter_fixes_no_nonzero_weight() {
    for (t, max_dim) in [("A2", 64), ("B2", 81), ("G2", 77), ("A3", 64), ("C3", 70)] {
        let (d, ws) = modules(t, max_dim);
        for w in ws {
            for mu in d.freudenthal_multiplicities(&w).unwrap().keys() {
                if mu.iter().any(|&x| x != 0) {
                    assert_ne!(&d.coxeter_action_on_weights(mu), mu, "{t} {w:?}");
                }
            }
        }
    }
}

#[test]
fn braid_relations_rank_three() {
    for (t, max_dim) in [("A3", 20), ("B3", 21), ("C3", 21)] {
        let (d, ws) = modules(t, max_dim);
        for w in ws {
            let m = build_module(&d, &w, 600).unwrap();
            let rep = braid::verify_braid_relations(&m).unwrap();
            assert!(rep.all_pass(), "{t} {w:?}: {:?}", rep.failures());
            for i in 0..d.rank() {
                let a = braid::s_operator(&m, i).unwrap();
                let b = braid::s_operator_via_exponentials(&m, i).unwrap();
                assert_eq!(a.matrix, b.matrix, "{t} {w:?} S{i}");
                let ts = braid::verify_ts_conjugation(&m, i).unwrap();
                assert!(ts.all_pass(), "{t} {w:?} T{i}: {:?}", ts.failures());
            }
        }
    }
}

#[test]
fn trace_lives_on_zero_space() {
    for (t, max_dim) in [("A2", 64), ("B2", 81), ("G2", 64), ("A3", 45), ("B3", 35), ("C3", 21)] {
        let (d, ws) = modules(t, max_dim);
        for w in ws {
            let m = build_module(&d, &w, 600).unwrap();
            let pi = braid::coxeter_operator(&m).unwrap();
            let zero = vec![0; d.rank()];
            let full = braid::trace(&m, &pi, None).unwrap();
            let restricted = if m.weight_space_indices(&zero).is_empty() {
                RatFunc::zero()
            } else {
                braid::trace(&m, &pi, Some(&zero)).unwrap()
            };
            assert_eq!(full, restricted, "{t} {w:?}");
            let eps = braid::epsilon_classical(&d, &w, 600).unwrap().0;
            assert!((-1..=1).contains(&eps));
            assert_eq!(eps == 0, full == RatFunc::zero(), "{t} {w:?}");
        }
    }
}
