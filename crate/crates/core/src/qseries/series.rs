use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fraction::{count_below, fmt_ratio, is_positive, parse_ratio, Rational};

/// Truncated formal series in one variable with rational exponents.
///
/// Coefficients at exponents `>= cutoff` are unknown and never stored.
/// Binary operations keep the smaller of the two cutoffs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    terms: BTreeMap<Rational, Rational>,
    cutoff: Rational,
}

/// First exponent at which two series disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub exponent: Rational,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl QSeries {
    /// The zero series known up to `cutoff`.
    pub fn zero(cutoff: Rational) -> Self {
        QSeries { terms: BTreeMap::new(), cutoff }
    }

    pub fn one(cutoff: Rational) -> Self {
        Self::from_terms([(Rational::zero(), Rational::one())], cutoff)
    }

    /// Sums the given terms, dropping everything at or above `cutoff`.
    pub fn from_terms<I: IntoIterator<Item = (Rational, Rational)>>(terms: I, cutoff: Rational) -> Self {
        let mut s = Self::zero(cutoff);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    fn add_term(&mut self, e: Rational, c: Rational) {
        if c.is_zero() || e >= self.cutoff {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn cutoff(&self) -> &Rational {
        &self.cutoff
    }

    pub fn coeff(&self, e: &Rational) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Stored terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowers the cutoff (never raises it).
    pub fn truncate(&self, cutoff: &Rational) -> Self {
        let c = cutoff.min(&self.cutoff).clone();
        Self::from_terms(self.terms.iter().map(|(e, v)| (e.clone(), v.clone())), c)
    }

    /// Substitutes `x -> x^s` for `s > 0`; the cutoff scales with it.
    pub fn substitute_power(&self, s: &Rational) -> Result<Self> {
        if !is_positive(s) {
            return Err(Error::InvalidArgument(format!("substitution power must be positive, got {s}")));
        }
        Ok(Self::from_terms(self.terms.iter().map(|(e, v)| (e * s, v.clone())), &self.cutoff * s))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, v)| (e.clone(), v * k)), self.cutoff.clone())
    }

    /// Integer power; negative exponents need an invertible constant term
    /// and no negative exponents in the series.
    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one(self.cutoff.clone());
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// Multiplicative inverse via the geometric series in the non-constant
    /// part. Requires all exponents `>= 0` and a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeff(&Rational::zero());
        if c0.is_zero() || self.terms.keys().next().is_some_and(|e| *e < Rational::zero()) {
            return Err(Error::NotInvertible("series has no invertible constant term".into()));
        }
        let inv0 = c0.recip();
        // self = c0 (1 + t), 1/self = inv0 * sum (-t)^k
        let t = Self::from_terms(
            self.terms.iter().filter(|(e, _)| !e.is_zero()).map(|(e, v)| (e.clone(), -(v * &inv0))),
            self.cutoff.clone(),
        );
        let mut acc = Self::one(self.cutoff.clone());
        let mut term = Self::one(self.cutoff.clone());
        loop {
            term = &term * &t;
            if term.is_empty() {
                break;
            }
            acc = &acc + &term;
        }
        Ok(acc.scale(&inv0))
    }

    /// Equality of all coefficients below the common cutoff.
    pub fn eq_to_cutoff(&self, other: &QSeries) -> bool {
        self.first_discrepancy(other).is_none()
    }

    pub fn first_discrepancy(&self, other: &QSeries) -> Option<Discrepancy> {
        let cutoff = self.cutoff.clone().min(other.cutoff.clone());
        let mut exps: Vec<&Rational> = self.terms.keys().chain(other.terms.keys()).filter(|e| **e < cutoff).collect();
        exps.sort();
        exps.dedup();
        exps.into_iter().find_map(|e| {
            let (a, b) = (self.coeff(e), other.coeff(e));
            (a != b).then(|| Discrepancy { exponent: e.clone(), lhs: a, rhs: b })
        })
    }

    fn binop(&self, other: &QSeries, negate: bool) -> QSeries {
        let cutoff = self.cutoff.clone().min(other.cutoff.clone());
        let mut out = self.truncate(&cutoff);
        for (e, c) in other.terms() {
            out.add_term(e.clone(), if negate { -c.clone() } else { c.clone() });
        }
        out
    }
}

impl<'a> Add<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        self.binop(rhs, false)
    }
}

impl<'a> Sub<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self.binop(rhs, true)
    }
}

impl<'a> Mul<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        let cutoff = self.cutoff.clone().min(rhs.cutoff.clone());
        let mut out = QSeries::zero(cutoff.clone());
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                let e = e1 + e2;
                // exponents are sorted, so later e2 only get larger
                if e >= cutoff {
                    break;
                }
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        super::laurent::write_terms(f, "x", self.terms.iter().map(|(e, c)| (fmt_ratio(e), c)))?;
        write!(f, " + O(x^{})", fmt_ratio(&self.cutoff))
    }
}

/// Wire form shared by [`QSeries`] serialization.
#[derive(Serialize, Deserialize)]
struct SeriesWire {
    cutoff: String,
    terms: Vec<[String; 2]>,
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesWire {
            cutoff: fmt_ratio(&self.cutoff),
            terms: self.terms.iter().map(|(e, c)| [fmt_ratio(e), fmt_ratio(c)]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = SeriesWire::deserialize(d)?;
        let cutoff = parse_ratio(&w.cutoff).map_err(D::Error::custom)?;
        let mut out = QSeries::zero(cutoff);
        let mut prev: Option<Rational> = None;
        for [e, c] in &w.terms {
            let e = parse_ratio(e).map_err(D::Error::custom)?;
            let c = parse_ratio(c).map_err(D::Error::custom)?;
            if prev.as_ref().is_some_and(|p| *p >= e) {
                return Err(D::Error::custom("series terms must be strictly ascending"));
            }
            if c.is_zero() || e >= out.cutoff {
                return Err(D::Error::custom("series term is zero or beyond the cutoff"));
            }
            prev = Some(e.clone());
            out.terms.insert(e, c);
        }
        Ok(out)
    }
}

fn require_positive(name: &str, r: &Rational) -> Result<()> {
    if is_positive(r) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive, got {r}")))
    }
}

/// `prod_{n>=1} (1 - x^{n*scale})` below `cutoff`, by direct expansion of
/// the product.
pub fn euler_phi(scale: &Rational, cutoff: &Rational) -> Result<QSeries> {
    require_positive("scale", scale)?;
    require_positive("cutoff", cutoff)?;
    let m = count_below(&(cutoff / scale));
    let mut a = vec![BigInt::zero(); m];
    a[0] = BigInt::one();
    for n in 1..m {
        for j in (n..m).rev() {
            if !a[j - n].is_zero() {
                let t = a[j - n].clone();
                a[j] -= t;
            }
        }
    }
    Ok(QSeries::from_terms(
        a.into_iter()
            .enumerate()
            .map(|(k, c)| (Rational::from_integer(BigInt::from(k)) * scale, Rational::from_integer(c))),
        cutoff.clone(),
    ))
}

/// Euler's pentagonal expansion `sum_n (-1)^n x^{(3n^2-n)/2}`.
pub fn pentagonal_series(cutoff: &Rational) -> Result<QSeries> {
    require_positive("cutoff", cutoff)?;
    let mut terms = vec![(Rational::zero(), Rational::one())];
    for n in 1i64.. {
        let lo = Rational::from_integer(BigInt::from((3 * n * n - n) / 2));
        if lo >= *cutoff {
            break;
        }
        let hi = Rational::from_integer(BigInt::from((3 * n * n + n) / 2));
        let sign = Rational::from_integer(BigInt::from(if n % 2 == 0 { 1 } else { -1 }));
        terms.push((lo, sign.clone()));
        terms.push((hi, sign));
    }
    Ok(QSeries::from_terms(terms, cutoff.clone()))
}

/// Jacobi's `sum_{n>=0} (-1)^n (2n+1) x^{n(n+1)/2}`.
pub fn jacobi_cube_series(cutoff: &Rational) -> Result<QSeries> {
    require_positive("cutoff", cutoff)?;
    let mut terms = Vec::new();
    for n in 0i64.. {
        let e = Rational::from_integer(BigInt::from(n * (n + 1) / 2));
        if e >= *cutoff {
            break;
        }
        let c = if n % 2 == 0 { 2 * n + 1 } else { -(2 * n + 1) };
        terms.push((e, Rational::from_integer(BigInt::from(c))));
    }
    Ok(QSeries::from_terms(terms, cutoff.clone()))
}

/// Partition numbers `p(n)` by the parts-counting recurrence.
pub fn partition_numbers(count: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); count];
    if count == 0 {
        return p;
    }
    p[0] = BigInt::one();
    for part in 1..count {
        for n in part..count {
            let t = p[n - part].clone();
            p[n] += t;
        }
    }
    p
}

/// `sum p(n) x^n` below `cutoff`.
pub fn partition_series(cutoff: &Rational) -> Result<QSeries> {
    require_positive("cutoff", cutoff)?;
    let p = partition_numbers(count_below(cutoff));
    Ok(QSeries::from_terms(
        p.into_iter()
            .enumerate()
            .map(|(n, c)| (Rational::from_integer(BigInt::from(n)), Rational::from_integer(c))),
        cutoff.clone(),
    ))
}

/// Truncated series in two variables `t` and `q`, truncated in `t` only.
/// The `q`-coefficient of each `t`-power is a finite sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoVarSeries {
    terms: BTreeMap<(Rational, Rational), Rational>,
    t_cutoff: Rational,
}

impl TwoVarSeries {
    pub fn zero(t_cutoff: Rational) -> Self {
        TwoVarSeries { terms: BTreeMap::new(), t_cutoff }
    }

    pub fn one(t_cutoff: Rational) -> Self {
        let mut s = Self::zero(t_cutoff);
        s.add_term(Rational::zero(), Rational::zero(), Rational::one());
        s
    }

    pub fn t_cutoff(&self) -> &Rational {
        &self.t_cutoff
    }

    /// Adds `c * t^te * q^qe`; terms at or beyond the `t` cutoff are dropped.
    pub fn add_term(&mut self, te: Rational, qe: Rational, c: Rational) {
        if c.is_zero() || te >= self.t_cutoff {
            return;
        }
        let key = (te, qe);
        let slot = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Terms sorted by `t` exponent, then `q` exponent.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Rational, &Rational)> + '_ {
        self.terms.iter().map(|((t, q), c)| (t, q, c))
    }

    pub fn coeff(&self, te: &Rational, qe: &Rational) -> Rational {
        self.terms.get(&(te.clone(), qe.clone())).cloned().unwrap_or_else(Rational::zero)
    }

    /// The coefficient of `t^te` as a finite `q`-series (exact, so its
    /// cutoff is placed above its last exponent).
    pub fn t_coefficient(&self, te: &Rational) -> Vec<(Rational, Rational)> {
        self.terms.iter().filter(|((t, _), _)| t == te).map(|((_, q), c)| (q.clone(), c.clone())).collect()
    }

    /// `prod_{n>=1} (1 - (t^a q^b)^n)` truncated in `t`, with `a > 0`.
    pub fn euler_phi(t_scale: &Rational, q_scale: &Rational, t_cutoff: &Rational) -> Result<Self> {
        let one_var = euler_phi(t_scale, t_cutoff)?;
        let ratio = q_scale / t_scale;
        let mut s = Self::zero(t_cutoff.clone());
        for (e, c) in one_var.terms() {
            s.add_term(e.clone(), e * &ratio, c.clone());
        }
        Ok(s)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.t_cutoff.clone());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn first_discrepancy(&self, other: &TwoVarSeries) -> Option<(Rational, Rational, Rational, Rational)> {
        let cutoff = self.t_cutoff.clone().min(other.t_cutoff.clone());
        let mut keys: Vec<&(Rational, Rational)> =
            self.terms.keys().chain(other.terms.keys()).filter(|(t, _)| *t < cutoff).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().find_map(|(t, q)| {
            let (a, b) = (self.coeff(t, q), other.coeff(t, q));
            (a != b).then(|| (t.clone(), q.clone(), a, b))
        })
    }
}

impl<'a> Mul<&'a TwoVarSeries> for &'a TwoVarSeries {
    type Output = TwoVarSeries;
    fn mul(self, rhs: &TwoVarSeries) -> TwoVarSeries {
        let cutoff = self.t_cutoff.clone().min(rhs.t_cutoff.clone());
        let mut out = TwoVarSeries::zero(cutoff);
        for ((t1, q1), c1) in &self.terms {
            for ((t2, q2), c2) in &rhs.terms {
                out.add_term(t1 + t2, q1 + q2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for TwoVarSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for ((t, q), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})*t^({})*q^({})", fmt_ratio(c), fmt_ratio(t), fmt_ratio(q))?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", fmt_ratio(&self.t_cutoff))
    }
}

#[derive(Serialize, Deserialize)]
struct TwoVarWire {
    t_cutoff: String,
    terms: Vec<[String; 3]>,
}

impl Serialize for TwoVarSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TwoVarWire {
            t_cutoff: fmt_ratio(&self.t_cutoff),
            terms: self.terms.iter().map(|((t, q), c)| [fmt_ratio(t), fmt_ratio(q), fmt_ratio(c)]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TwoVarSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = TwoVarWire::deserialize(d)?;
        let mut out = TwoVarSeries::zero(parse_ratio(&w.t_cutoff).map_err(D::Error::custom)?);
        for [t, q, c] in &w.terms {
            let t = parse_ratio(t).map_err(D::Error::custom)?;
            let q = parse_ratio(q).map_err(D::Error::custom)?;
            let c = parse_ratio(c).map_err(D::Error::custom)?;
            out.add_term(t, q, c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraction::{int, rat};

    fn series(terms: &[(i64, i64)], cutoff: i64) -> QSeries {
        QSeries::from_terms(terms.iter().map(|&(e, c)| (int(e), int(c))), int(cutoff))
    }

    #[test]
    fn euler_phi_examples() {
        assert_eq!(euler_phi(&int(1), &int(6)).unwrap(), series(&[(0, 1), (1, -1), (2, -1), (5, 1)], 6));
        assert_eq!(euler_phi(&int(1), &int(1)).unwrap(), series(&[(0, 1)], 1));
        // x -> x^2 in the pentagonal expansion: 1 - x^2 - x^4 + x^10 + ...
        let p2 = pentagonal_series(&rat(9, 2)).unwrap().substitute_power(&int(2)).unwrap();
        assert_eq!(euler_phi(&int(2), &int(9)).unwrap(), p2);
        assert_eq!(euler_phi(&int(2), &int(9)).unwrap(), series(&[(0, 1), (2, -1), (4, -1)], 9));
    }

    #[test]
    fn pentagonal_and_jacobi_examples() {
        assert_eq!(pentagonal_series(&int(6)).unwrap(), series(&[(0, 1), (1, -1), (2, -1), (5, 1)], 6));
        assert_eq!(pentagonal_series(&int(1)).unwrap(), series(&[(0, 1)], 1));
        assert_eq!(jacobi_cube_series(&int(4)).unwrap(), series(&[(0, 1), (1, -3), (3, 5)], 4));
        assert_eq!(jacobi_cube_series(&int(1)).unwrap(), series(&[(0, 1)], 1));
    }

    #[test]
    fn powers() {
        let phi = euler_phi(&int(1), &int(10)).unwrap();
        assert_eq!(phi.pow(1).unwrap(), phi);
        assert_eq!(phi.pow(3).unwrap(), jacobi_cube_series(&int(10)).unwrap());
        assert_eq!(phi.pow(-1).unwrap(), partition_series(&int(10)).unwrap());
        assert_eq!(phi.pow(0).unwrap(), QSeries::one(int(10)));
    }

    #[test]
    fn partition_inverse() {
        let prod = &euler_phi(&int(1), &int(8)).unwrap() * &partition_series(&int(8)).unwrap();
        assert_eq!(prod, QSeries::one(int(8)));
        let p: Vec<i64> = partition_numbers(10).iter().map(|v| v.try_into().unwrap()).collect();
        assert_eq!(p, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30]);
    }

    #[test]
    fn cutoffs_take_minimum() {
        let a = euler_phi(&int(1), &int(10)).unwrap();
        let b = euler_phi(&int(1), &int(4)).unwrap();
        assert_eq!((&a * &b).cutoff(), &int(4));
        assert!(a.eq_to_cutoff(&b));
        let d = a.first_discrepancy(&series(&[(0, 1), (1, -1)], 10)).unwrap();
        assert_eq!((d.exponent, d.lhs, d.rhs), (int(2), int(-1), int(0)));
    }

    #[test]
    fn rational_exponents() {
        let s = euler_phi(&rat(2, 3), &int(2)).unwrap();
        let exps: Vec<String> = s.terms().map(|(e, _)| fmt_ratio(e)).collect();
        assert_eq!(exps, vec!["0", "2/3", "4/3"]);
    }

    #[test]
    fn inverse_requires_constant_term() {
        let s = series(&[(1, 1)], 5);
        assert!(matches!(s.pow(-1), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn json_shape() {
        let s = QSeries::from_terms([(rat(3, 4), int(-2)), (int(0), int(1))], int(2));
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"cutoff":"2","terms":[["0","1"],["3/4","-2"]]}"#);
        let back: QSeries = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<QSeries>(r#"{"cutoff":"1","terms":[["2","1"]]}"#).is_err());
    }

    #[test]
    fn two_var_jacobi_pattern() {
        // phi(q^2 t)^3 = 1 - 3 q^2 t + 5 q^6 t^3 - ...
        let s = TwoVarSeries::euler_phi(&int(1), &int(2), &int(4)).unwrap().pow(3);
        let got: Vec<(String, String, String)> =
            s.terms().map(|(t, q, c)| (fmt_ratio(t), fmt_ratio(q), fmt_ratio(c))).collect();
        let want = [("0", "0", "1"), ("1", "2", "-3"), ("3", "6", "5")];
        assert_eq!(got, want.map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string())));
    }
}
