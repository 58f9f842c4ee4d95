//! Quantum Weyl group operators `S_i`, their products, Lusztig's `T_i`, and
//! the classical Coxeter action on zero-weight spaces.

use std::collections::BTreeSet;

use num_traits::{One, Signed as _, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fraction::Rational;
use crate::linalg::{null_space, SparseMatrix, SparseVec};
use crate::qmodule::{build_classical_module, ClassicalModule, IrrModule, Report};
use crate::qseries::RatFunc;
use crate::rootdata::{fmt_weight, RootDatum, Weight};

/// One irreducible `U_{q_i}(sl2)`-string `w_0, ..., w_n` with
/// `w_k = F_i^{(k)} w_0` and `E_i w_0 = 0`.
#[derive(Clone, Debug)]
pub struct IString {
    pub i: usize,
    pub n: i64,
    pub top_weight: Weight,
    /// Coordinates of `w_0..w_n` in the module basis.
    pub vectors: Vec<SparseVec<RatFunc>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BraidOperator {
    /// Generator indices, 0-based, leftmost factor first.
    pub word: Vec<usize>,
    pub matrix: SparseMatrix<RatFunc>,
}

/// A generator of `U_q(g)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    E(usize),
    F(usize),
    K(usize),
    KInv(usize),
}

impl std::fmt::Display for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Generator::E(j) => write!(f, "E{}", j + 1),
            Generator::F(j) => write!(f, "F{}", j + 1),
            Generator::K(j) => write!(f, "K{}", j + 1),
            Generator::KInv(j) => write!(f, "K{}^-1", j + 1),
        }
    }
}

fn qi_pow(m: &IrrModule, i: usize, e: i64) -> RatFunc {
    RatFunc::q_pow(m.datum.d[i] * e)
}

fn check_index(m: &IrrModule, i: usize) -> Result<()> {
    if i < m.rank() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("generator index {} out of range for rank {}", i + 1, m.rank())))
    }
}

pub fn istring_decompose(m: &IrrModule, i: usize) -> Result<Vec<IString>> {
    check_index(m, i)?;
    let d = m.datum.d[i];
    let mut strings = Vec::new();
    for (mu, range) in m.weight_spaces() {
        let n = mu[i];
        if n < 0 {
            continue;
        }
        let up: Weight = mu.iter().enumerate().map(|(j, &x)| x + m.datum.cartan[j][i]).collect();
        let cols: Vec<usize> = range.clone().collect();
        let up_idx = m.weight_space_indices(&up);
        let kernel = if up_idx.is_empty() {
            (0..cols.len())
                .map(|c| (0..cols.len()).map(|r| if r == c { RatFunc::one() } else { RatFunc::zero() }).collect())
                .collect()
        } else {
            null_space(&m.e[i].restrict(&up_idx, &cols).to_dense(), cols.len())
        };
        if kernel.len() != cols.len() - up_idx.len() {
            return Err(Error::Internal(format!("kernel of E{} at weight {} has the wrong dimension", i + 1, fmt_weight(mu))));
        }
        for w0 in kernel {
            let mut vectors = Vec::with_capacity(n as usize + 1);
            let mut cur: SparseVec<RatFunc> =
                w0.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(p, x)| (cols[p], x)).collect();
            for k in 1..=n + 1 {
                let next = m.f[i].apply(&cur);
                vectors.push(cur);
                let scale = RatFunc::qint(k, d).recip()?;
                cur = next.into_iter().map(|(r, x)| (r, &x * &scale)).collect();
            }
            if !cur.is_empty() {
                return Err(Error::Internal(format!("{}-string from weight {} is longer than {}", i + 1, fmt_weight(mu), n + 1)));
            }
            strings.push(IString { i, n, top_weight: mu.clone(), vectors });
        }
    }
    let total: usize = strings.iter().map(|s| s.vectors.len()).sum();
    if total != m.dim() {
        return Err(Error::Internal(format!("{}-strings cover {} of {} basis vectors", i + 1, total, m.dim())));
    }
    Ok(strings)
}

/// `S_i` from Saito's closed formula `S_i w_k = (-1)^{n-k} q_i^{(n-k)(k+1)} w_{n-k}`.
pub fn s_operator(m: &IrrModule, i: usize) -> Result<BraidOperator> {
    let strings = istring_decompose(m, i)?;
    let dim = m.dim();
    let mut cols: Vec<SparseVec<RatFunc>> = Vec::with_capacity(dim);
    let mut trip = Vec::new();
    for s in &strings {
        let base = cols.len();
        for k in 0..=s.n {
            let sign = if (s.n - k) % 2 == 0 { RatFunc::one() } else { -RatFunc::one() };
            let c = &sign * &qi_pow(m, i, (s.n - k) * (k + 1));
            trip.push(((base as i64 + s.n - k) as usize, base + k as usize, c));
        }
        cols.extend(s.vectors.iter().cloned());
    }
    let q = SparseMatrix::from_columns(dim, &cols);
    let flip = SparseMatrix::from_triplets(dim, dim, trip);
    let matrix = q.mul(&flip)?.mul(&q.inverse()?)?;
    Ok(BraidOperator { word: vec![i], matrix })
}

/// `exp_{q_i^{-1}}(x) = sum_k q_i^{-k(k-1)/2} x^k / [k]_{q_i}!` for nilpotent `x`.
///
/// Each term is the previous one times `q_i^{1-k} x / [k]_{q_i}`, which keeps
/// the entries close to divided powers instead of dividing by `[k]!` at the end.
fn q_exp(m: &IrrModule, i: usize, x: &SparseMatrix<RatFunc>) -> Result<SparseMatrix<RatFunc>> {
    let d = m.datum.d[i];
    let n = x.rows();
    let mut total = SparseMatrix::identity(n);
    let mut term = SparseMatrix::identity(n);
    for k in 1.. {
        if k > n as i64 {
            return Err(Error::Internal("q-exponential of a non-nilpotent matrix".into()));
        }
        let c = &qi_pow(m, i, 1 - k) / &RatFunc::qint(k, d);
        term = term.mul(x)?.scale(&c);
        if term.is_zero() {
            break;
        }
        total = total.add(&term)?;
    }
    Ok(total)
}

/// `S_i` as the triple q-exponential product times `q_i^{H_i(H_i+1)/2}`.
pub fn s_operator_via_exponentials(m: &IrrModule, i: usize) -> Result<BraidOperator> {
    check_index(m, i)?;
    let e = &m.e[i];
    let k = &m.k[i];
    let kinv = m.k_inv(i);
    let x1 = e.mul(&kinv)?.scale(&qi_pow(m, i, -1));
    let x2 = m.f[i].scale(&-RatFunc::one());
    let x3 = e.mul(k)?.scale(&qi_pow(m, i, 1));
    let h = m.diag(|mu| qi_pow(m, i, mu[i] * (mu[i] + 1) / 2));
    let matrix = SparseMatrix::product(m.dim(), [&q_exp(m, i, &x1)?, &q_exp(m, i, &x2)?, &q_exp(m, i, &x3)?, &h])?;
    Ok(BraidOperator { word: vec![i], matrix })
}

/// Product in the written order; the rightmost operator acts first.
pub fn compose(ops: &[BraidOperator]) -> Result<BraidOperator> {
    let Some(first) = ops.first() else {
        return Err(Error::InvalidArgument("empty product".into()));
    };
    let mut matrix = first.matrix.clone();
    let mut word = first.word.clone();
    for op in &ops[1..] {
        matrix = matrix.mul(&op.matrix)?;
        word.extend(&op.word);
    }
    Ok(BraidOperator { word, matrix })
}

pub fn all_s_operators(m: &IrrModule) -> Result<Vec<BraidOperator>> {
    (0..m.rank()).map(|i| s_operator(m, i)).collect()
}

/// `Pi = S_1 S_2 ... S_l`.
pub fn coxeter_operator(m: &IrrModule) -> Result<BraidOperator> {
    compose(&all_s_operators(m)?)
}

/// `theta = Pi^h` by repeated squaring.
pub fn theta_operator(m: &IrrModule) -> Result<BraidOperator> {
    theta_from(&coxeter_operator(m)?, m.datum.h)
}

pub fn theta_from(pi: &BraidOperator, h: i64) -> Result<BraidOperator> {
    let matrix = pi.matrix.pow(h as u64)?;
    let word = std::iter::repeat_n(pi.word.iter().copied(), h as usize).flatten().collect();
    Ok(BraidOperator { word, matrix })
}

/// Order of `s_i s_j` in the Weyl group.
pub fn braid_order(d: &RootDatum, i: usize, j: usize) -> usize {
    match d.cartan[i][j] * d.cartan[j][i] {
        0 => 2,
        1 => 3,
        2 => 4,
        3 => 6,
        _ => unreachable!("finite type"),
    }
}

pub fn verify_braid_relations_with(m: &IrrModule, ops: &[BraidOperator]) -> Result<Report> {
    let mut rep = Report::default();
    let n = m.dim();
    for i in 0..m.rank() {
        for j in i + 1..m.rank() {
            let len = braid_order(&m.datum, i, j);
            let side = |a: usize, b: usize| -> Result<SparseMatrix<RatFunc>> {
                let seq: Vec<&SparseMatrix<RatFunc>> =
                    (0..len).map(|t| &ops[if t % 2 == 0 { a } else { b }].matrix).collect();
                SparseMatrix::product(n, seq)
            };
            rep.push(format!("braid ({},{}) length {len}", i + 1, j + 1), side(i, j)? == side(j, i)?);
        }
    }
    Ok(rep)
}

pub fn verify_braid_relations(m: &IrrModule) -> Result<Report> {
    verify_braid_relations_with(m, &all_s_operators(m)?)
}

fn divided_power(m: &IrrModule, i: usize, x: &SparseMatrix<RatFunc>, k: i64) -> Result<SparseMatrix<RatFunc>> {
    let mut p = SparseMatrix::identity(m.dim());
    let mut fact = RatFunc::one();
    for t in 1..=k {
        p = p.mul(x)?;
        fact = &fact * &RatFunc::qint(t, m.datum.d[i]);
    }
    Ok(p.scale(&fact.recip()?))
}

fn k_power(m: &IrrModule, i: usize, e: i64) -> SparseMatrix<RatFunc> {
    let d = m.datum.d[i];
    m.diag(|mu| RatFunc::q_pow(d * mu[i] * e))
}

pub fn generator_matrix(m: &IrrModule, g: Generator) -> SparseMatrix<RatFunc> {
    match g {
        Generator::E(j) => m.e[j].clone(),
        Generator::F(j) => m.f[j].clone(),
        Generator::K(j) => m.k[j].clone(),
        Generator::KInv(j) => m.k_inv(j),
    }
}

/// Matrix of Lusztig's `T_i(g)` on the module.
pub fn lusztig_t_on_generator(m: &IrrModule, i: usize, g: Generator) -> Result<SparseMatrix<RatFunc>> {
    check_index(m, i)?;
    let c = &m.datum.cartan;
    let minus_one = -RatFunc::one();
    Ok(match g {
        Generator::E(j) if j == i => m.f[i].mul(&m.k[i])?.scale(&minus_one),
        Generator::F(j) if j == i => m.k_inv(i).mul(&m.e[i])?.scale(&minus_one),
        Generator::K(j) => m.k[j].mul(&k_power(m, i, -c[i][j]))?,
        Generator::KInv(j) => m.k_inv(j).mul(&k_power(m, i, c[i][j]))?,
        Generator::E(j) => {
            let r = -c[i][j];
            let mut total = SparseMatrix::zeros(m.dim(), m.dim());
            for k in 0..=r {
                let sign = if k % 2 == 0 { RatFunc::one() } else { minus_one.clone() };
                let coef = &sign * &qi_pow(m, i, -k);
                let term = SparseMatrix::product(
                    m.dim(),
                    [&divided_power(m, i, &m.e[i], r - k)?, &m.e[j], &divided_power(m, i, &m.e[i], k)?],
                )?;
                total = total.add(&term.scale(&coef))?;
            }
            total
        }
        Generator::F(j) => {
            let r = -c[i][j];
            let mut total = SparseMatrix::zeros(m.dim(), m.dim());
            for k in 0..=r {
                let sign = if k % 2 == 0 { RatFunc::one() } else { minus_one.clone() };
                let coef = &sign * &qi_pow(m, i, k);
                let term = SparseMatrix::product(
                    m.dim(),
                    [&divided_power(m, i, &m.f[i], k)?, &m.f[j], &divided_power(m, i, &m.f[i], r - k)?],
                )?;
                total = total.add(&term.scale(&coef))?;
            }
            total
        }
    })
}

pub fn all_generators(rank: usize) -> Vec<Generator> {
    (0..rank).flat_map(|j| [Generator::E(j), Generator::F(j), Generator::K(j), Generator::KInv(j)]).collect()
}

/// Checks `T_i(g) = S_i g S_i^{-1}` for every generator `g`.
pub fn verify_ts_conjugation_with(m: &IrrModule, i: usize, s: &BraidOperator) -> Result<Report> {
    let sinv = s.matrix.inverse()?;
    let mut rep = Report::default();
    for g in all_generators(m.rank()) {
        let lhs = lusztig_t_on_generator(m, i, g)?;
        let rhs = s.matrix.mul(&generator_matrix(m, g))?.mul(&sinv)?;
        rep.push(format!("T{}({g})", i + 1), lhs == rhs);
    }
    Ok(rep)
}

pub fn verify_ts_conjugation(m: &IrrModule, i: usize) -> Result<Report> {
    verify_ts_conjugation_with(m, i, &s_operator(m, i)?)
}

/// True if the operator maps each weight space `V_mu` into `V_{f(mu)}`.
pub fn respects_weights(m: &IrrModule, op: &SparseMatrix<RatFunc>, f: impl Fn(&Weight) -> Weight) -> bool {
    op.triplets().all(|(r, c, _)| m.basis_weights[r] == f(&m.basis_weights[c]))
}

/// Exact trace, optionally restricted to a weight space that the operator must preserve.
pub fn trace(m: &IrrModule, op: &BraidOperator, subspace: Option<&[i64]>) -> Result<RatFunc> {
    match subspace {
        None => Ok(op.matrix.trace()),
        Some(mu) => {
            let idx = m.weight_space_indices(mu);
            if !op.matrix.maps_into(&idx, &idx) {
                return Err(Error::NonInvariantSubspace(fmt_weight(mu)));
            }
            Ok(op.matrix.restrict(&idx, &idx).trace())
        }
    }
}

/// Trace of the classical Coxeter element on `V_1(lambda)_0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpsilonValue(pub i8);

fn classical_exp_apply(x: &SparseMatrix<Rational>, v: &SparseVec<Rational>, sign: i64) -> SparseVec<Rational> {
    let mut total = v.clone();
    let mut term = v.clone();
    for k in 1i64.. {
        term = x.apply(&term);
        if term.is_empty() {
            break;
        }
        let c = Rational::new(sign.into(), k.into());
        term = term.into_iter().map(|(r, a)| (r, a * &c)).collect();
        for (r, a) in &term {
            let s = total.remove(r).unwrap_or_else(Rational::zero) + a;
            if !s.is_zero() {
                total.insert(*r, s);
            }
        }
    }
    total
}

/// `s_i v = exp(e_i) exp(-f_i) exp(e_i) v`.
pub fn classical_reflection_apply(m: &ClassicalModule, i: usize, v: &SparseVec<Rational>) -> SparseVec<Rational> {
    let a = classical_exp_apply(&m.e[i], v, 1);
    let b = classical_exp_apply(&m.f[i], &a, -1);
    classical_exp_apply(&m.e[i], &b, 1)
}

/// Matrix of `c = s_1 ... s_l` on the zero-weight space (rows and columns
/// indexed by the zero-weight basis), or `None` if that space is empty.
pub fn classical_coxeter_on_zero_space_of(m: &ClassicalModule) -> Result<Option<Vec<Vec<Rational>>>> {
    let zero = vec![0i64; m.rank()];
    let idx = m.weight_space_indices(&zero);
    if idx.is_empty() {
        return Ok(None);
    }
    let pos: std::collections::BTreeMap<usize, usize> = idx.iter().enumerate().map(|(p, &r)| (r, p)).collect();
    let mut block = vec![vec![Rational::zero(); idx.len()]; idx.len()];
    for (c, &col) in idx.iter().enumerate() {
        let mut v: SparseVec<Rational> = [(col, Rational::one())].into();
        for i in (0..m.rank()).rev() {
            v = classical_reflection_apply(m, i, &v);
        }
        for (r, x) in v {
            let Some(&p) = pos.get(&r) else {
                return Err(Error::NonInvariantSubspace(fmt_weight(&zero)));
            };
            block[p][c] = x;
        }
    }
    Ok(Some(block))
}

pub fn epsilon_of(m: &ClassicalModule) -> Result<EpsilonValue> {
    let Some(block) = classical_coxeter_on_zero_space_of(m)? else {
        return Ok(EpsilonValue(0));
    };
    let tr: Rational = (0..block.len()).fold(Rational::zero(), |acc, i| acc + &block[i][i]);
    if !tr.is_integer() || tr.abs() > Rational::one() {
        return Err(Error::Internal(format!("Coxeter trace {tr} on the zero-weight space is outside {{-1, 0, 1}}")));
    }
    Ok(EpsilonValue(tr.to_integer().to_i8().expect("small")))
}

pub fn classical_coxeter_on_zero_space(d: &RootDatum, lambda: &[i64], limit: u64) -> Result<Option<Vec<Vec<Rational>>>> {
    if !d.in_root_lattice(lambda) {
        d.check_dominant(lambda)?;
        return Ok(None);
    }
    classical_coxeter_on_zero_space_of(&build_classical_module(d, lambda, limit)?)
}

pub fn epsilon_classical(d: &RootDatum, lambda: &[i64], limit: u64) -> Result<EpsilonValue> {
    d.check_dominant(lambda)?;
    if !d.in_root_lattice(lambda) {
        return Ok(EpsilonValue(0));
    }
    epsilon_of(&build_classical_module(d, lambda, limit)?)
}

/// Weights of the module in Coxeter orbits (for reporting).
pub fn coxeter_orbits(m: &IrrModule) -> Vec<Vec<Weight>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (mu, _) in m.weight_spaces() {
        if seen.contains(mu) {
            continue;
        }
        let mut orbit = vec![mu.clone()];
        seen.insert(mu.clone());
        let mut cur = m.datum.coxeter_action_on_weights(mu);
        while &cur != mu {
            seen.insert(cur.clone());
            orbit.push(cur.clone());
            cur = m.datum.coxeter_action_on_weights(&cur);
        }
        out.push(orbit);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmodule::build_module;

    fn module(t: &str, w: &[i64]) -> IrrModule {
        build_module(&RootDatum::parse(t).unwrap(), w, 600).unwrap()
    }

    #[test]
    fn sl2_v1() {
        let m = module("A1", &[1]);
        let s = s_operator(&m, 0).unwrap().matrix;
        assert_eq!(s.get(1, 0), -RatFunc::q_pow(1));
        assert_eq!(s.get(0, 1), RatFunc::one());
        assert_eq!(s_operator_via_exponentials(&m, 0).unwrap().matrix, s);
    }

    #[test]
    fn sl2_v2_middle() {
        let m = module("A1", &[2]);
        let s = s_operator(&m, 0).unwrap();
        assert_eq!(s.matrix.get(1, 1), -RatFunc::q_pow(2));
        assert_eq!(trace(&m, &s, None).unwrap(), -RatFunc::q_pow(2));
    }

    #[test]
    fn a2_strings() {
        let m = module("A2", &[1, 1]);
        let mut sizes: Vec<usize> = istring_decompose(&m, 0).unwrap().iter().map(|s| s.vectors.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 2, 3]);
    }

    #[test]
    fn ts_on_a1() {
        let m = module("A1", &[3]);
        assert!(verify_ts_conjugation(&m, 0).unwrap().all_pass());
    }

    #[test]
    fn classical_eps() {
        let a1 = RootDatum::parse("A1").unwrap();
        assert_eq!(epsilon_classical(&a1, &[2], 600).unwrap(), EpsilonValue(-1));
        assert_eq!(epsilon_classical(&a1, &[1], 600).unwrap(), EpsilonValue(0));
        let a2 = RootDatum::parse("A2").unwrap();
        assert_eq!(epsilon_classical(&a2, &[1, 1], 600).unwrap(), EpsilonValue(-1));
    }
}
