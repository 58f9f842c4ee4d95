use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::zpoly::ZLaurent;

/// Laurent polynomial in `q` with exact rational coefficients.
///
/// Zero coefficients are never stored, so two values are equal iff their
/// term maps are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0)
    }

    /// `q`.
    pub fn q() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()))
    }

    pub fn monomial(c: BigRational, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i64) -> BigRational {
        self.terms.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `q -> q^{-1}`.
    pub fn invert_variable(&self) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (-e, c.clone())))
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in self.terms() {
            let p = if e >= 0 {
                num_traits::pow(x.clone(), e as usize)
            } else {
                num_traits::pow(x.recip(), (-e) as usize)
            };
            acc += c * p;
        }
        acc
    }

    /// Exact quotient, if `other` divides `self` in Q[q, q^{-1}].
    pub fn div_exact(&self, other: &LaurentPoly) -> Option<LaurentPoly> {
        assert!(!other.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (dlo, dhi) = (other.min_exp()?, other.max_exp()?);
        let lead = other.coeff(dhi);
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(top) = rem.max_exp() {
            let lo = rem.min_exp().unwrap();
            if top - dhi < lo - dlo {
                return None;
            }
            let c = rem.coeff(top) / &lead;
            let e = top - dhi;
            for (oe, oc) in other.terms() {
                rem.add_term(oe + e, -(oc * &c));
            }
            quot.add_term(e, c);
        }
        Some(quot)
    }

    /// Splits into an integral Laurent polynomial and a positive integer
    /// such that `self = z / den`.
    pub(crate) fn to_integral(&self) -> (ZLaurent, BigInt) {
        let den = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
        let Some(lo) = self.min_exp() else {
            return (ZLaurent::zero(), den);
        };
        let hi = self.max_exp().unwrap();
        let mut c = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, v) in self.terms() {
            c[(e - lo) as usize] = (v * BigRational::from_integer(den.clone())).to_integer();
        }
        (ZLaurent::from_coeffs(lo, c), den)
    }

    pub(crate) fn from_integral(z: &ZLaurent) -> Self {
        Self::from_terms(z.terms().map(|(e, c)| (e, BigRational::from_integer(c.clone()))))
    }
}

impl From<i64> for LaurentPoly {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

/// Writes terms from the highest exponent down, e.g. `q^4 + 1 + q^-4`.
pub(crate) fn write_terms<'a, I>(f: &mut fmt::Formatter<'_>, var: &str, terms: I) -> fmt::Result
where
    I: Iterator<Item = (String, &'a BigRational)>,
{
    let mut first = true;
    for (exp, c) in terms {
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        first = false;
        let is_const = exp == "0";
        if is_const {
            write!(f, "{mag}")?;
            continue;
        }
        if !mag.is_one() {
            if mag.is_integer() {
                write!(f, "{mag}*")?;
            } else {
                write!(f, "({mag})*")?;
            }
        }
        if exp == "1" {
            write!(f, "{var}")?;
        } else if exp.contains('/') || exp.starts_with('-') {
            write!(f, "{var}^({exp})")?;
        } else {
            write!(f, "{var}^{exp}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, "q", self.terms.iter().rev().map(|(e, c)| (e.to_string(), c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_round_trip() {
        let q = LaurentPoly::q();
        let a = &(&q + &LaurentPoly::one()) * &(&q - &LaurentPoly::from_int(3));
        let b = &q - &LaurentPoly::from_int(3);
        assert_eq!(a.div_exact(&b).unwrap(), &q + &LaurentPoly::one());
        assert!(LaurentPoly::one().div_exact(&q.pow(2).add(LaurentPoly::one())).is_none());
    }

    #[test]
    fn display() {
        let one = BigRational::one();
        let p = LaurentPoly::from_terms([(4, one.clone()), (0, one.clone()), (-4, one)]);
        assert_eq!(p.to_string(), "q^4 + 1 + q^(-4)");
        assert_eq!((-LaurentPoly::q().pow(2)).to_string(), "-q^2");
    }
}
