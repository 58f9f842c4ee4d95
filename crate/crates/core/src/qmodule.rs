//! Irreducible highest-weight modules, quantum and classical.
//!
//! A vector of weight `mu` below the top is determined by the tuple of its
//! images under `E_1..E_l` (an irreducible module has no other singular
//! vectors). The construction walks the weight diagram downwards, forms the
//! candidates `F_i b` for basis vectors `b` one level up, computes their
//! `E`-images from the commutation relations, and keeps an echelon basis of
//! those images.

use std::collections::BTreeMap;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::fraction::Rational;
use crate::linalg::{Field, IncrementalSpan, SparseMatrix, SparseVec};
use crate::qseries::{qbinomial, RatFunc};
use crate::rootdata::{fmt_weight, RootDatum, Weight};

/// Default maximum module dimension.
pub const DEFAULT_SIZE_LIMIT: u64 = 600;

/// Scalars a module can be built over.
pub trait Scalar: Field {
    /// `[n]_{q^d}` for the quantum algebra, `n` classically.
    fn qint(n: i64, d: i64) -> Self;
    /// Eigenvalue of `K_i` (resp. `h_i`) on a vector of weight `mu`: `q^{d_i mu_i}` (resp. `mu_i`).
    fn torus(d_i: i64, mu_i: i64) -> Self;
}

impl Scalar for RatFunc {
    fn qint(n: i64, d: i64) -> Self {
        RatFunc::qint(n, d)
    }
    fn torus(d_i: i64, mu_i: i64) -> Self {
        RatFunc::q_pow(d_i * mu_i)
    }
}

impl Scalar for Rational {
    fn qint(n: i64, _d: i64) -> Self {
        Rational::from_integer(n.into())
    }
    fn torus(_d_i: i64, mu_i: i64) -> Self {
        Rational::from_integer(mu_i.into())
    }
}

/// A highest-weight module with explicit generator matrices.
///
/// For the quantum algebra `k[i]` is `K_i`; for the classical algebra it is `h_i`.
#[derive(Clone, Debug)]
pub struct HwModule<T> {
    pub datum: RootDatum,
    pub lambda: Weight,
    /// Weight of each basis vector; index 0 is the highest-weight vector.
    pub basis_weights: Vec<Weight>,
    pub e: Vec<SparseMatrix<T>>,
    pub f: Vec<SparseMatrix<T>>,
    pub k: Vec<SparseMatrix<T>>,
    spaces: BTreeMap<Weight, Range<usize>>,
}

pub type IrrModule = HwModule<RatFunc>;
pub type ClassicalModule = HwModule<Rational>;

/// Outcome of a list of named exact checks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<(String, bool)>,
}

impl Report {
    pub fn push(&mut self, name: impl Into<String>, pass: bool) {
        self.checks.push((name.into(), pass));
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|(_, p)| *p)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, p)| !p).map(|(n, _)| n.as_str()).collect()
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }
}

/// Refuses modules above `limit` before any construction work.
pub fn check_size(datum: &RootDatum, lambda: &[i64], limit: u64) -> Result<u64> {
    let dim = datum.weyl_dim(lambda)?;
    if dim > limit {
        return Err(Error::SizeLimit { lambda: fmt_weight(lambda), dim, limit });
    }
    Ok(dim)
}

pub fn build_module(datum: &RootDatum, lambda: &[i64], limit: u64) -> Result<IrrModule> {
    HwModule::build(datum, lambda, limit)
}

pub fn build_classical_module(datum: &RootDatum, lambda: &[i64], limit: u64) -> Result<ClassicalModule> {
    HwModule::build(datum, lambda, limit)
}

impl<T: Scalar> HwModule<T> {
    pub fn build(datum: &RootDatum, lambda: &[i64], limit: u64) -> Result<Self> {
        let dim = check_size(datum, lambda, limit)? as usize;
        let l = datum.rank();
        let mults = datum.freudenthal_multiplicities(lambda)?;

        // order weight spaces by depth, then by coordinates (descending)
        let mut order: Vec<(i64, Weight)> = mults
            .keys()
            .map(|mu| {
                let diff: Weight = lambda.iter().zip(mu).map(|(a, b)| a - b).collect();
                let depth: Rational = datum.weight_to_root(&diff).map(|x| x.into_iter().sum())?;
                Ok((depth.to_integer().try_into().expect("small depth"), mu.clone()))
            })
            .collect::<Result<_>>()?;
        order.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)));

        let mut spaces: BTreeMap<Weight, Range<usize>> = BTreeMap::new();
        let mut basis_weights = Vec::with_capacity(dim);
        for (_, mu) in &order {
            let m = mults[mu] as usize;
            spaces.insert(mu.clone(), basis_weights.len()..basis_weights.len() + m);
            basis_weights.extend(std::iter::repeat_n(mu.clone(), m));
        }
        if basis_weights.len() != dim {
            return Err(Error::Internal("Freudenthal total differs from the Weyl dimension".into()));
        }

        let mut e_cols: Vec<Vec<SparseVec<T>>> = vec![vec![SparseVec::new(); dim]; l];
        let mut f_cols: Vec<Vec<SparseVec<T>>> = vec![vec![SparseVec::new(); dim]; l];
        // last generator and length of the trailing run in each basis monomial
        let mut run: Vec<Option<(usize, i64)>> = vec![None; dim];

        let shift = |mu: &Weight, i: usize, sign: i64| -> Weight {
            mu.iter().enumerate().map(|(j, &x)| x + sign * datum.cartan[j][i]).collect()
        };
        let apply = |cols: &[SparseVec<T>], v: &SparseVec<T>| -> SparseVec<T> {
            let mut out: SparseVec<T> = SparseVec::new();
            for (k, x) in v {
                for (r, y) in &cols[*k] {
                    let t = x.mul(y);
                    let s = match out.remove(r) {
                        Some(prev) => prev.add(&t),
                        None => t,
                    };
                    if !s.is_zero() {
                        out.insert(*r, s);
                    }
                }
            }
            out
        };

        for (_, mu) in order.iter().skip(1) {
            let range = spaces[mu].clone();
            let mut span: IncrementalSpan<T> = IncrementalSpan::default();
            for i in 0..l {
                let up = shift(mu, i, 1);
                let Some(up_range) = spaces.get(&up).cloned() else { continue };
                for b in up_range {
                    let (scale_n, new_run) = match run[b] {
                        Some((g, a)) if g == i => (a + 1, a + 1),
                        _ => (1, 1),
                    };
                    let scale = T::qint(scale_n, datum.d[i]).inv();
                    let mut data: SparseVec<T> = SparseVec::new();
                    for j in 0..l {
                        let mut part = apply(&f_cols[i], &e_cols[j][b]);
                        if i == j {
                            let c = T::qint(up[i], datum.d[i]);
                            let s = match part.remove(&b) {
                                Some(prev) => prev.add(&c),
                                None => c,
                            };
                            if !s.is_zero() {
                                part.insert(b, s);
                            }
                        }
                        data.extend(part);
                    }
                    let data: SparseVec<T> = data.into_iter().map(|(k, x)| (k, x.mul(&scale))).collect();
                    match span.insert_or_express(&data) {
                        Err(idx) => {
                            if idx >= range.len() {
                                return Err(Error::Internal(format!(
                                    "weight space {} has more independent vectors than its multiplicity",
                                    fmt_weight(mu)
                                )));
                            }
                            let v = range.start + idx;
                            run[v] = Some((i, new_run));
                            for (j, cols) in e_cols.iter_mut().enumerate() {
                                let target = shift(mu, j, 1);
                                let Some(tr) = spaces.get(&target) else { continue };
                                cols[v] = data.iter().filter(|(k, _)| tr.contains(k)).map(|(k, x)| (*k, x.clone())).collect();
                            }
                            f_cols[i][b] = [(v, scale.inv())].into();
                        }
                        Ok(expr) => {
                            let inv = scale.inv();
                            f_cols[i][b] = expr.into_iter().map(|(k, x)| (range.start + k, x.mul(&inv))).collect();
                        }
                    }
                }
            }
            if span.len() != range.len() {
                return Err(Error::Internal(format!(
                    "weight space {} has rank {} but multiplicity {}",
                    fmt_weight(mu),
                    span.len(),
                    range.len()
                )));
            }
        }

        let e = e_cols.iter().map(|c| SparseMatrix::from_columns(dim, c)).collect();
        let f = f_cols.iter().map(|c| SparseMatrix::from_columns(dim, c)).collect();
        let k = (0..l)
            .map(|i| SparseMatrix::diagonal(basis_weights.iter().map(|mu| T::torus(datum.d[i], mu[i])).collect()))
            .collect();
        Ok(HwModule { datum: datum.clone(), lambda: lambda.to_vec(), basis_weights, e, f, k, spaces })
    }

    /// Rebuilds the index from stored parts (used when loading from a cache).
    pub fn from_parts(
        datum: &RootDatum,
        lambda: Weight,
        basis_weights: Vec<Weight>,
        e: Vec<SparseMatrix<T>>,
        f: Vec<SparseMatrix<T>>,
    ) -> Result<Self> {
        let l = datum.rank();
        let dim = basis_weights.len();
        if e.len() != l || f.len() != l {
            return Err(Error::DimensionMismatch { expected: l, got: e.len().min(f.len()) });
        }
        for m in e.iter().chain(&f) {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: m.rows() });
            }
        }
        let mut spaces: BTreeMap<Weight, Range<usize>> = BTreeMap::new();
        let mut start = 0;
        for idx in 0..=dim {
            if idx == dim || (idx > start && basis_weights[idx] != basis_weights[start]) {
                if idx > start && spaces.insert(basis_weights[start].clone(), start..idx).is_some() {
                    return Err(Error::Internal("weight spaces are not contiguous".into()));
                }
                start = idx;
            }
        }
        let k = (0..l)
            .map(|i| SparseMatrix::diagonal(basis_weights.iter().map(|mu| T::torus(datum.d[i], mu[i])).collect()))
            .collect();
        Ok(HwModule { datum: datum.clone(), lambda, basis_weights, e, f, k, spaces })
    }
}

impl<T: Field> HwModule<T> {
    pub fn dim(&self) -> usize {
        self.basis_weights.len()
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn weight_space_indices(&self, mu: &[i64]) -> Vec<usize> {
        self.spaces.get(mu).cloned().map(|r| r.collect()).unwrap_or_default()
    }

    pub fn weight_range(&self, mu: &[i64]) -> Option<Range<usize>> {
        self.spaces.get(mu).cloned()
    }

    /// Weights with their index ranges, in weight order.
    pub fn weight_spaces(&self) -> impl Iterator<Item = (&Weight, &Range<usize>)> + '_ {
        self.spaces.iter()
    }

    /// Multiplicity of every weight, read off the basis.
    pub fn multiplicities(&self) -> BTreeMap<Weight, u64> {
        self.spaces.iter().map(|(w, r)| (w.clone(), r.len() as u64)).collect()
    }

    /// True if every basis vector is reached from index 0 by the `F_i`.
    pub fn generated_by_f(&self) -> bool {
        let mut seen = vec![false; self.dim()];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(v) = stack.pop() {
            for f in &self.f {
                for (r, _) in f.column(v) {
                    if !seen[r] {
                        seen[r] = true;
                        stack.push(r);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// True if each `E_i` annihilates the highest-weight vector.
    pub fn top_is_singular(&self) -> bool {
        self.e.iter().all(|e| e.column(0).is_empty())
    }

    pub(crate) fn diag(&self, f: impl Fn(&Weight) -> T) -> SparseMatrix<T> {
        SparseMatrix::diagonal(self.basis_weights.iter().map(f).collect())
    }
}

impl IrrModule {
    pub fn q_i(&self, i: usize) -> i64 {
        self.datum.d[i]
    }

    pub fn k_inv(&self, i: usize) -> SparseMatrix<RatFunc> {
        let d = self.datum.d[i];
        self.diag(|mu| RatFunc::q_pow(-d * mu[i]))
    }

    /// Checks every defining relation of `U_q(g)` as a matrix identity.
    pub fn verify_relations(&self) -> Result<Report> {
        let l = self.rank();
        let n = self.dim();
        let mut rep = Report::default();
        let c = &self.datum.cartan;
        for i in 0..l {
            let d = self.datum.d[i];
            let ki = &self.k[i];
            let kinv = self.k_inv(i);
            rep.push(format!("K{0} K{0}^-1 = 1", i + 1), ki.mul(&kinv)? == SparseMatrix::identity(n));
            for j in 0..l {
                let ij = format!("{},{}", i + 1, j + 1);
                rep.push(format!("K{} K{} = K{1} K{0}", i + 1, j + 1), ki.mul(&self.k[j])? == self.k[j].mul(ki)?);
                let ke = ki.mul(&self.e[j])?.mul(&kinv)?;
                rep.push(format!("K E K^-1 ({ij})"), ke == self.e[j].scale(&RatFunc::q_pow(d * c[i][j])));
                let kf = ki.mul(&self.f[j])?.mul(&kinv)?;
                rep.push(format!("K F K^-1 ({ij})"), kf == self.f[j].scale(&RatFunc::q_pow(-d * c[i][j])));
                let comm = self.e[i].mul(&self.f[j])?.sub(&self.f[j].mul(&self.e[i])?)?;
                let want = if i == j {
                    let den = RatFunc::q_pow(d) - RatFunc::q_pow(-d);
                    ki.sub(&kinv)?.scale(&den.recip()?)
                } else {
                    SparseMatrix::zeros(n, n)
                };
                rep.push(format!("[E,F] ({ij})"), comm == want);
                if i != j {
                    rep.push(format!("Serre E ({ij})"), serre(&self.e[i], &self.e[j], 1 - c[i][j], d)?.is_zero());
                    rep.push(format!("Serre F ({ij})"), serre(&self.f[i], &self.f[j], 1 - c[i][j], d)?.is_zero());
                }
            }
        }
        Ok(rep)
    }
}

/// `sum_r (-1)^r [m choose r]_{q^d} x^{m-r} y x^r`.
fn serre(x: &SparseMatrix<RatFunc>, y: &SparseMatrix<RatFunc>, m: i64, d: i64) -> Result<SparseMatrix<RatFunc>> {
    let n = x.rows();
    let pows: Vec<SparseMatrix<RatFunc>> =
        (0..=m).scan(SparseMatrix::identity(n), |acc, _| Some(std::mem::replace(acc, acc.mul(x).unwrap()))).collect();
    let mut total = SparseMatrix::zeros(n, n);
    for r in 0..=m {
        let coef = RatFunc::from_laurent(&qbinomial(m, r as u32, d)?);
        let coef = if r % 2 == 1 { -coef } else { coef };
        let term = pows[(m - r) as usize].mul(y)?.mul(&pows[r as usize])?.scale(&coef);
        total = total.add(&term)?;
    }
    Ok(total)
}

impl ClassicalModule {
    /// Checks the Chevalley–Serre relations of `U(g)`.
    pub fn verify_relations(&self) -> Result<Report> {
        let l = self.rank();
        let n = self.dim();
        let c = &self.datum.cartan;
        let mut rep = Report::default();
        let comm = |a: &SparseMatrix<Rational>, b: &SparseMatrix<Rational>| -> Result<SparseMatrix<Rational>> {
            a.mul(b)?.sub(&b.mul(a)?)
        };
        for i in 0..l {
            for j in 0..l {
                let ij = format!("{},{}", i + 1, j + 1);
                let cij = Rational::from_integer(c[i][j].into());
                rep.push(format!("[h,h] ({ij})"), comm(&self.k[i], &self.k[j])?.is_zero());
                rep.push(format!("[h,e] ({ij})"), comm(&self.k[i], &self.e[j])? == self.e[j].scale(&cij));
                rep.push(format!("[h,f] ({ij})"), comm(&self.k[i], &self.f[j])? == self.f[j].scale(&-cij));
                let want = if i == j { self.k[i].clone() } else { SparseMatrix::zeros(n, n) };
                rep.push(format!("[e,f] ({ij})"), comm(&self.e[i], &self.f[j])? == want);
                if i != j {
                    for (name, x, y) in [("e", &self.e[i], &self.e[j]), ("f", &self.f[i], &self.f[j])] {
                        let mut ad = y.clone();
                        for _ in 0..(1 - c[i][j]) {
                            ad = comm(x, &ad)?;
                        }
                        rep.push(format!("Serre {name} ({ij})"), ad.is_zero());
                    }
                }
            }
        }
        Ok(rep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_string() {
        let r = RootDatum::parse("A1").unwrap();
        let m = build_module(&r, &[4], 600).unwrap();
        assert_eq!(m.dim(), 5);
        for k in 0..5i64 {
            let ku = k as usize;
            if k > 0 {
                assert_eq!(m.e[0].get(ku - 1, ku), RatFunc::qint(4 - k + 1, 1));
            }
            if k < 4 {
                assert_eq!(m.f[0].get(ku + 1, ku), RatFunc::qint(k + 1, 1));
            }
            assert_eq!(m.k[0].get(ku, ku), RatFunc::q_pow(4 - 2 * k));
        }
    }

    #[test]
    fn adjoint_a2() {
        let r = RootDatum::parse("A2").unwrap();
        let m = build_module(&r, &[1, 1], 600).unwrap();
        assert_eq!(m.dim(), 8);
        assert_eq!(m.weight_space_indices(&[0, 0]).len(), 2);
        assert!(m.verify_relations().unwrap().all_pass());
        let c = build_classical_module(&r, &[1, 1], 600).unwrap();
        assert!(c.verify_relations().unwrap().all_pass());
        assert!(c.k.iter().all(|h| Field::is_zero(&h.trace())));
    }

    #[test]
    fn size_limit() {
        let r = RootDatum::parse("A2").unwrap();
        assert!(matches!(build_module(&r, &[3, 3], 20), Err(Error::SizeLimit { dim: 64, .. })));
    }
}
