//! Per-weight trace terms and the truncated series identities built from them.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::braid::{self, BraidOperator};
use crate::cache::ModuleCache;
use crate::error::{Error, Result};
use crate::fraction::{fmt_ratio, int, is_positive, ratio_str, Rational};
use crate::qmodule::{build_classical_module, build_module, check_size, IrrModule, DEFAULT_SIZE_LIMIT};
use crate::qseries::{euler_phi, Discrepancy, QSeries, RatFunc, TwoVarSeries};
use crate::rootdata::{fmt_weight, RootDatum, Weight};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceTerm {
    pub lambda: Weight,
    #[serde(with = "crate::fraction::int_str")]
    pub dim: u64,
    #[serde(with = "crate::fraction::int_str")]
    pub epsilon: i8,
    /// `(lambda, lambda + 2 rho) / h`.
    #[serde(with = "ratio_str")]
    pub exponent: Rational,
    /// `(lambda, lambda + 2 rho) / k`.
    #[serde(with = "ratio_str")]
    pub c_lambda: Rational,
}

/// Everything computed for one weight on the quantum side.
#[derive(Clone, Debug)]
pub struct TraceDetail {
    pub term: TraceTerm,
    pub trace: RatFunc,
    pub trace_zero_space: RatFunc,
    pub epsilon_quantum: i8,
    pub epsilon_classical: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    #[serde(with = "ratio_str")]
    pub exponent: Rational,
    /// `q` exponent for the two-variable identity (`exponent` is then the `t` exponent).
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::fraction::opt_ratio_str")]
    pub q_exponent: Option<Rational>,
    #[serde(with = "ratio_str")]
    pub lhs: Rational,
    #[serde(with = "ratio_str")]
    pub rhs: Rational,
}

impl From<Discrepancy> for DiscrepancyReport {
    fn from(d: Discrepancy) -> Self {
        DiscrepancyReport { exponent: d.exponent, q_exponent: None, lhs: d.lhs, rhs: d.rhs }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeriesValue {
    One(QSeries),
    Two(TwoVarSeries),
}

impl std::fmt::Display for SeriesValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SeriesValue::One(s) => write!(f, "{s}"),
            SeriesValue::Two(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    #[serde(rename = "type")]
    pub lie_type: String,
    #[serde(with = "ratio_str")]
    pub cutoff: Rational,
    #[serde(rename = "match")]
    pub matches: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_discrepancy: Option<DiscrepancyReport>,
    pub lhs: SeriesValue,
    pub rhs: SeriesValue,
    pub terms: Vec<TraceTerm>,
    pub wall_time_ms: u64,
}

/// Scalar action of `theta` on one weight space.
#[derive(Clone, Debug)]
pub struct ThetaSpace {
    pub weight: Weight,
    /// `Some(x)` if `theta` acts on the space by the scalar `x`.
    pub scalar: Option<RatFunc>,
    /// `(lambda, lambda + 2 rho) - (mu, mu)`.
    pub expected_exponent: Rational,
}

#[derive(Clone, Debug)]
pub struct ThetaReport {
    pub lambda: Weight,
    /// `theta v_lambda = c1 q^{(lambda, 2 rho)} v_lambda`.
    pub top_sign: Option<i8>,
    pub top_exponent: Rational,
    /// `theta = c2 q^{(lambda, lambda + 2 rho)}` on the zero-weight space, if nonempty.
    pub zero_sign: Option<i8>,
    pub zero_exponent: Rational,
    pub has_zero_space: bool,
    pub spaces: Vec<ThetaSpace>,
    pub theta_diagonal: bool,
    pub theta: BraidOperator,
}

impl ThetaReport {
    /// The checks on `v_lambda` and on `V(lambda)_0`, with matching signs.
    pub fn pass(&self) -> bool {
        match (self.top_sign, self.has_zero_space, self.zero_sign) {
            (Some(_), false, _) => true,
            (Some(a), true, Some(b)) => a == b,
            _ => false,
        }
    }

    /// Every weight space carries the scalar `±q^{(lambda,lambda+2rho)-(mu,mu)}`.
    pub fn weight_spaces_match(&self) -> bool {
        self.spaces.iter().all(|s| {
            s.scalar.as_ref().and_then(RatFunc::as_monomial).is_some_and(|(c, e)| {
                (c == BigInt::one() || c == -BigInt::one()) && int(e) == s.expected_exponent
            })
        })
    }
}

/// `±q^e` with the expected exponent, as a sign.
fn signed_power(x: &RatFunc, e: &Rational) -> Option<i8> {
    let (c, got) = x.as_monomial()?;
    if int(got) != *e {
        return None;
    }
    if c == BigInt::one() {
        Some(1)
    } else if c == -BigInt::one() {
        Some(-1)
    } else {
        None
    }
}

/// `prod_i phi(q^{2 d_i})^{h+1}`.
pub fn rhs_series(d: &RootDatum, cutoff: &Rational) -> Result<QSeries> {
    product_side(d, cutoff, &Rational::one())
}

/// `prod_i phi(x^{2 d_i s})^{h+1}`.
fn product_side(d: &RootDatum, cutoff: &Rational, s: &Rational) -> Result<QSeries> {
    let mut acc = QSeries::one(cutoff.clone());
    for &di in &d.d {
        acc = &acc * &euler_phi(&(int(2 * di) * s), cutoff)?;
    }
    acc.pow(d.h + 1)
}

fn check_cutoff(c: &Rational) -> Result<()> {
    if is_positive(c) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("cutoff must be positive, got {c}")))
    }
}

/// Computation context: size limit and optional module cache.
#[derive(Clone, Debug)]
pub struct Engine {
    pub size_limit: u64,
    pub cache: Option<ModuleCache>,
}

impl Default for Engine {
    fn default() -> Self {
        Engine { size_limit: DEFAULT_SIZE_LIMIT, cache: None }
    }
}

impl Engine {
    pub fn new(size_limit: u64, cache: Option<ModuleCache>) -> Self {
        Engine { size_limit, cache }
    }

    pub fn module(&self, d: &RootDatum, lambda: &[i64]) -> Result<Arc<IrrModule>> {
        check_size(d, lambda, self.size_limit)?;
        if let Some(c) = &self.cache {
            if let Some(m) = c.load(d, lambda) {
                return Ok(Arc::new(m));
            }
        }
        let m = build_module(d, lambda, self.size_limit)?;
        if let Some(c) = &self.cache {
            // the cache is advisory: a failed write only costs a rebuild later
            let _ = c.store(&m);
        }
        Ok(Arc::new(m))
    }

    pub fn epsilon_classical(&self, d: &RootDatum, lambda: &[i64]) -> Result<i8> {
        Ok(braid::epsilon_classical(d, lambda, self.size_limit)?.0)
    }

    /// Builds `V(lambda)`, takes the trace of `Pi`, and checks it against the
    /// classical zero-space trace.
    pub fn trace_detail(&self, d: &RootDatum, lambda: &[i64]) -> Result<TraceDetail> {
        d.check_dominant(lambda)?;
        let m = self.module(d, lambda)?;
        let pi = braid::coxeter_operator(&m)?;
        self.trace_detail_with(d, &m, &pi)
    }

    pub fn trace_detail_with(&self, d: &RootDatum, m: &IrrModule, pi: &BraidOperator) -> Result<TraceDetail> {
        let lambda = &m.lambda;
        let exponent = d.trace_exponent(lambda)?;
        let c_lambda = d.c_lambda(lambda)?;
        let trace = braid::trace(m, pi, None)?;
        let zero: Weight = vec![0; d.rank()];
        let trace_zero_space = if m.weight_space_indices(&zero).is_empty() {
            RatFunc::zero()
        } else {
            braid::trace(m, pi, Some(&zero))?
        };
        let name = fmt_weight(lambda);
        if trace != trace_zero_space {
            return Err(Error::Internal(format!("trace of Pi on V({name}) differs from its zero-space trace")));
        }
        let epsilon_quantum = if trace.is_zero() {
            0
        } else {
            signed_power(&trace, &exponent).ok_or_else(|| {
                Error::Internal(format!("trace {trace} of Pi on V({name}) is not ±q^{}", fmt_ratio(&exponent)))
            })?
        };
        let epsilon_classical = self.epsilon_classical(d, lambda)?;
        if epsilon_quantum != epsilon_classical {
            return Err(Error::Internal(format!(
                "V({name}): quantum epsilon {epsilon_quantum} differs from classical epsilon {epsilon_classical}"
            )));
        }
        Ok(TraceDetail {
            term: TraceTerm { lambda: lambda.clone(), dim: m.dim() as u64, epsilon: epsilon_quantum, exponent, c_lambda },
            trace,
            trace_zero_space,
            epsilon_quantum,
            epsilon_classical,
        })
    }

    pub fn quantum_trace_term(&self, d: &RootDatum, lambda: &[i64]) -> Result<TraceTerm> {
        Ok(self.trace_detail(d, lambda)?.term)
    }

    /// Trace terms for the given weights; weights outside the root lattice
    /// get `epsilon = 0` without building a module.
    fn terms_for(&self, d: &RootDatum, weights: &[Weight], classical: bool) -> Result<Vec<TraceTerm>> {
        for w in weights.iter().filter(|w| d.in_root_lattice(w)) {
            check_size(d, w, self.size_limit)?;
        }
        let mut terms: Vec<TraceTerm> = weights
            .par_iter()
            .map(|w| {
                if !d.in_root_lattice(w) {
                    return Ok(TraceTerm {
                        lambda: w.clone(),
                        dim: d.weyl_dim(w)?,
                        epsilon: 0,
                        exponent: d.trace_exponent(w)?,
                        c_lambda: d.c_lambda(w)?,
                    });
                }
                if classical {
                    let m = build_classical_module(d, w, self.size_limit)?;
                    Ok(TraceTerm {
                        lambda: w.clone(),
                        dim: m.dim() as u64,
                        epsilon: braid::epsilon_of(&m)?.0,
                        exponent: d.trace_exponent(w)?,
                        c_lambda: d.c_lambda(w)?,
                    })
                } else {
                    self.quantum_trace_term(d, w)
                }
            })
            .collect::<Result<_>>()?;
        terms.sort_by(|a, b| a.exponent.cmp(&b.exponent).then_with(|| a.lambda.cmp(&b.lambda)));
        Ok(terms)
    }

    /// `sum_lambda epsilon(lambda) dim V(lambda) q^{(lambda,lambda+2rho)/h}` below `cutoff`.
    pub fn lhs_series(&self, d: &RootDatum, cutoff: &Rational) -> Result<(QSeries, Vec<TraceTerm>)> {
        check_cutoff(cutoff)?;
        let weights = d.enumerate_contributing_weights(cutoff)?;
        let terms = self.terms_for(d, &weights, false)?;
        let series = QSeries::from_terms(
            terms.iter().map(|t| (t.exponent.clone(), int(t.epsilon as i64 * t.dim as i64))),
            cutoff.clone(),
        );
        Ok((series, terms))
    }

    pub fn verify_main_identity(&self, d: &RootDatum, cutoff: &Rational) -> Result<IdentityReport> {
        let start = Instant::now();
        let (lhs, terms) = self.lhs_series(d, cutoff)?;
        let rhs = rhs_series(d, cutoff)?;
        Ok(one_var_report("main", d, cutoff, lhs, rhs, terms, start))
    }

    /// Classical-only check: `prod_i phi(x^{2 d_i h / k})^{h+1} = sum epsilon dim x^{c(lambda)}`.
    pub fn verify_kostant_classical(&self, d: &RootDatum, cutoff: &Rational) -> Result<IdentityReport> {
        let start = Instant::now();
        check_cutoff(cutoff)?;
        let scale = int(d.h) / &d.k;
        let lhs = product_side(d, cutoff, &scale)?;
        let weights = d.enumerate_below(&(cutoff * &d.k))?;
        let terms = self.terms_for(d, &weights, true)?;
        let rhs = QSeries::from_terms(
            terms.iter().map(|t| (t.c_lambda.clone(), int(t.epsilon as i64 * t.dim as i64))),
            cutoff.clone(),
        );
        Ok(one_var_report("kostant", d, cutoff, lhs, rhs, terms, start))
    }

    /// `sum Tr(Pi, V(lambda)) dim V(lambda) t^{c(lambda)}` against
    /// `prod_i phi(q^{2 d_i} t^{2 d_i h / k})^{h+1}`, truncated in `t`.
    pub fn two_variable_series(&self, d: &RootDatum, cutoff_t: &Rational) -> Result<IdentityReport> {
        let start = Instant::now();
        check_cutoff(cutoff_t)?;
        let weights = d.enumerate_below(&(cutoff_t * &d.k))?;
        let terms = self.terms_for(d, &weights, false)?;
        let mut lhs = TwoVarSeries::zero(cutoff_t.clone());
        for t in &terms {
            lhs.add_term(t.c_lambda.clone(), t.exponent.clone(), int(t.epsilon as i64 * t.dim as i64));
        }
        let t_scale = int(d.h) / &d.k;
        let mut rhs = TwoVarSeries::one(cutoff_t.clone());
        for &di in &d.d {
            rhs = &rhs * &TwoVarSeries::euler_phi(&(int(2 * di) * &t_scale), &int(2 * di), cutoff_t)?;
        }
        let rhs = rhs.pow((d.h + 1) as u32);
        let first_discrepancy = lhs.first_discrepancy(&rhs).map(|(t, q, a, b)| DiscrepancyReport {
            exponent: t,
            q_exponent: Some(q),
            lhs: a,
            rhs: b,
        });
        Ok(IdentityReport {
            identity: "two-var".into(),
            lie_type: d.lie_type.to_string(),
            cutoff: cutoff_t.clone(),
            matches: first_discrepancy.is_none(),
            first_discrepancy,
            lhs: SeriesValue::Two(lhs),
            rhs: SeriesValue::Two(rhs),
            terms,
            wall_time_ms: start.elapsed().as_millis() as u64,
        })
    }

    pub fn verify_theta_scalars(&self, d: &RootDatum, lambda: &[i64]) -> Result<ThetaReport> {
        d.check_dominant(lambda)?;
        let m = self.module(d, lambda)?;
        let pi = braid::coxeter_operator(&m)?;
        theta_report(d, &m, &pi)
    }
}

pub fn theta_report(d: &RootDatum, m: &IrrModule, pi: &BraidOperator) -> Result<ThetaReport> {
    let theta = braid::theta_from(pi, d.h)?;
    let lambda = &m.lambda;
    let casimir = d.casimir(lambda)?;
    let two_rho: Weight = d.rho.iter().map(|x| 2 * x).collect();
    let top_exponent = d.inner(lambda, &two_rho)?;

    let col0 = theta.matrix.column(0);
    let top_sign = if col0.len() == 1 {
        col0.get(&0).and_then(|x| signed_power(x, &top_exponent))
    } else {
        None
    };

    let mut spaces = Vec::new();
    for (mu, range) in m.weight_spaces() {
        let idx: Vec<usize> = range.clone().collect();
        let expected_exponent = &casimir - d.inner(mu, mu)?;
        let scalar = if theta.matrix.maps_into(&idx, &idx) {
            let block = theta.matrix.restrict(&idx, &idx);
            let s = block.get(0, 0);
            let scalar_block = crate::linalg::SparseMatrix::identity(idx.len()).scale(&s);
            (block == scalar_block).then_some(s)
        } else {
            None
        };
        spaces.push(ThetaSpace { weight: mu.clone(), scalar, expected_exponent });
    }
    let zero: Weight = vec![0; d.rank()];
    let zero_space = spaces.iter().find(|s| s.weight == zero);
    let has_zero_space = zero_space.is_some();
    let zero_sign = zero_space.and_then(|s| s.scalar.as_ref()).and_then(|x| signed_power(x, &casimir));
    let theta_diagonal = theta.matrix.triplets().all(|(r, c, _)| r == c);
    Ok(ThetaReport {
        lambda: lambda.clone(),
        top_sign,
        top_exponent,
        zero_sign,
        zero_exponent: casimir,
        has_zero_space,
        spaces,
        theta_diagonal,
        theta,
    })
}

fn one_var_report(
    name: &str,
    d: &RootDatum,
    cutoff: &Rational,
    lhs: QSeries,
    rhs: QSeries,
    terms: Vec<TraceTerm>,
    start: Instant,
) -> IdentityReport {
    let first_discrepancy = lhs.first_discrepancy(&rhs).map(DiscrepancyReport::from);
    IdentityReport {
        identity: name.into(),
        lie_type: d.lie_type.to_string(),
        cutoff: cutoff.clone(),
        matches: first_discrepancy.is_none(),
        first_discrepancy,
        lhs: SeriesValue::One(lhs),
        rhs: SeriesValue::One(rhs),
        terms,
        wall_time_ms: start.elapsed().as_millis() as u64,
    }
}

/// Terms with a nonzero contribution.
pub fn contributing(terms: &[TraceTerm]) -> impl Iterator<Item = &TraceTerm> {
    terms.iter().filter(|t| t.epsilon != 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraction::rat;

    #[test]
    fn a1_terms() {
        let d = RootDatum::parse("A1").unwrap();
        let e = Engine::default();
        let t = e.quantum_trace_term(&d, &[4]).unwrap();
        assert_eq!((t.epsilon, t.exponent, t.dim), (1, int(6), 5));
        let t0 = e.quantum_trace_term(&d, &[0]).unwrap();
        assert_eq!((t0.epsilon, t0.exponent, t0.dim), (1, int(0), 1));
    }

    #[test]
    fn a1_lhs() {
        let d = RootDatum::parse("A1").unwrap();
        let (lhs, _) = Engine::default().lhs_series(&d, &int(3)).unwrap();
        assert_eq!(lhs, QSeries::from_terms([(int(0), int(1)), (int(2), int(-3))], int(3)));
    }

    #[test]
    fn a1_main_and_kostant() {
        let d = RootDatum::parse("A1").unwrap();
        let e = Engine::default();
        assert!(e.verify_main_identity(&d, &int(12)).unwrap().matches);
        assert!(e.verify_kostant_classical(&d, &int(10)).unwrap().matches);
        assert!(e.two_variable_series(&d, &int(4)).unwrap().matches);
        assert!(e.verify_main_identity(&d, &rat(1, 2)).unwrap().matches);
    }

    #[test]
    fn a2_theta() {
        let d = RootDatum::parse("A2").unwrap();
        let r = Engine::default().verify_theta_scalars(&d, &[1, 1]).unwrap();
        assert!(r.pass());
        assert!(r.weight_spaces_match());
    }
}
