use etatrace::linalg::SparseMatrix;
use etatrace::qmodule::{build_classical_module, build_module, IrrModule};
use etatrace::qseries::RatFunc;
use etatrace::rootdata::{RootDatum, Weight};
use etatrace::Error;

fn acceptance(t: &str, max_dim: u64) -> (RootDatum, Vec<Weight>) {
    let d = RootDatum::parse(t).unwrap();
    let w = d.dominant_weights_up_to_dim(max_dim).unwrap();
    (d, w)
}

const SETS: [(&str, u64); 7] = [("A1", 20), ("A2", 27), ("B2", 35), ("G2", 27), ("A3", 20), ("B3", 21), ("C3", 21)];

#[test]
fn relations_and_weight_diagrams() {
    for (t, max_dim) in SETS {
        let (d, ws) = acceptance(t, max_dim);
        for w in ws {
            let m = build_module(&d, &w, 600).unwrap();
            let rel = m.verify_relations().unwrap();
            assert!(rel.all_pass(), "{t} {w:?}: {:?}", rel.failures());
            assert_eq!(m.dim() as u64, d.weyl_dim(&w).unwrap(), "{t} {w:?}");
            assert_eq!(m.multiplicities(), d.freudenthal_multiplicities(&w).unwrap(), "{t} {w:?}");
            assert!(m.top_is_singular() && m.generated_by_f(), "{t} {w:?}");
            assert_eq!(m.basis_weights[0], w);
        }
    }
}

#[test]
fn classical_and_quantum_agree_on_weights() {
    for (t, max_dim) in SETS {
        let (d, ws) = acceptance(t, max_dim);
        for w in ws {
            let c = build_classical_module(&d, &w, 600).unwrap();
            let rel = c.verify_relations().unwrap();
            assert!(rel.all_pass(), "{t} {w:?}: {:?}", rel.failures());
            let q = build_module(&d, &w, 600).unwrap();
            assert_eq!(c.multiplicities(), q.multiplicities(), "{t} {w:?}");
            assert!(c.generated_by_f(), "{t} {w:?}");
        }
    }
}

/// `[n]_q` written out as `q^{n-1} + q^{n-3} + ... + q^{1-n}`.
fn qn(n: i64) -> RatFunc {
    (0..n).fold(RatFunc::zero(), |acc, j| &acc + &RatFunc::q_pow(n - 1 - 2 * j))
}

#[test]
fn sl2_strings_match_closed_form() {
    let d = RootDatum::parse("A1").unwrap();
    for n in 0..15i64 {
        let m: IrrModule = build_module(&d, &[n], 600).unwrap();
        assert_eq!(m.dim() as i64, n + 1);
        // EF and FE are diagonal with basis-independent eigenvalues
        let ef = m.e[0].mul(&m.f[0]).unwrap();
        let fe = m.f[0].mul(&m.e[0]).unwrap();
        for k in 0..=n {
            let idx = m.weight_space_indices(&[n - 2 * k]);
            assert_eq!(idx.len(), 1);
            let i = idx[0];
            assert_eq!(ef.get(i, i), &qn(k + 1) * &qn(n - k), "n={n} k={k}");
            assert_eq!(fe.get(i, i), &qn(k) * &qn(n - k + 1), "n={n} k={k}");
            assert_eq!(m.k[0].get(i, i), RatFunc::q_pow(n - 2 * k));
        }
        let ef_diag = SparseMatrix::diagonal((0..m.dim()).map(|i| ef.get(i, i)).collect());
        assert_eq!(ef, ef_diag);
    }
}

#[test]
fn size_limit_names_the_weight() {
    let d = RootDatum::parse("G2").unwrap();
    match build_module(&d, &[1, 1], 10) {
        Err(Error::SizeLimit { lambda, dim, limit }) => {
            assert_eq!((lambda.as_str(), dim, limit), ("1,1", 64, 10));
        }
        other => panic!("expected size-limit error, got {other:?}"),
    }
}
