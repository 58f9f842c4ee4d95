use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::laurent::LaurentPoly;
use super::zpoly::ZLaurent;
use crate::error::{Error, Result};

/// Exact element of Q(q), kept in a canonical reduced form.
///
/// The denominator is an integer polynomial with positive constant term
/// (no power of `q`), the numerator an integer Laurent polynomial, and the
/// two share no common factor in Z[q]. Equality and hashing are structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: ZLaurent,
    den: ZLaurent,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: ZLaurent::zero(), den: ZLaurent::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_bigint(BigInt::from(v))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        RatFunc { num: ZLaurent::constant(v), den: ZLaurent::one() }
    }

    pub fn from_ratio(r: &BigRational) -> Self {
        Self::reduce(ZLaurent::constant(r.numer().clone()), ZLaurent::constant(r.denom().clone()))
    }

    /// `c * q^exp`.
    pub fn monomial(c: i64, exp: i64) -> Self {
        RatFunc { num: ZLaurent::monomial(BigInt::from(c), exp), den: ZLaurent::one() }
    }

    /// `q^exp`.
    pub fn q_pow(exp: i64) -> Self {
        Self::monomial(1, exp)
    }

    /// The q-integer `[n]_{q^d}` as a rational function (it is a Laurent
    /// polynomial).
    pub fn qint(n: i64, d: i64) -> Self {
        RatFunc { num: super::qint::qnum_z(n, d), den: ZLaurent::one() }
    }

    pub fn from_laurent(p: &LaurentPoly) -> Self {
        let (z, d) = p.to_integral();
        Self::reduce(z, ZLaurent::constant(d))
    }

    /// `num / den`; errors if `den` is zero.
    pub fn new(num: &LaurentPoly, den: &LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (zn, dn) = num.to_integral();
        let (zd, dd) = den.to_integral();
        // (zn/dn) / (zd/dd) = zn*dd / (zd*dn)
        Ok(Self::reduce(zn.scale(&dd), zd.scale(&dn)))
    }

    fn reduce(num: ZLaurent, den: ZLaurent) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let shift = den.lo();
        let mut num = num.shift(-shift);
        let mut den = den.with_lo(0);
        if !den.is_one() {
            if let Some(x) = num.div_exact(&den) {
                return RatFunc { num: x, den: ZLaurent::one() };
            }
            let g = num.gcd(&den);
            if !g.is_one() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
        }
        Self::fix_sign(num, den)
    }

    fn fix_sign(num: ZLaurent, den: ZLaurent) -> Self {
        if den.constant_term_sign() == std::cmp::Ordering::Less {
            RatFunc { num: num.neg(), den: den.neg() }
        } else {
            RatFunc { num, den }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value is a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn numer(&self) -> LaurentPoly {
        LaurentPoly::from_integral(&self.num)
    }

    pub fn denom(&self) -> LaurentPoly {
        LaurentPoly::from_integral(&self.den)
    }

    /// If the value is `c * q^e` for an integer `c`, returns `(c, e)`.
    pub fn as_monomial(&self) -> Option<(BigInt, i64)> {
        if self.den.is_one() && self.num.is_monomial() {
            Some((self.num.coeffs()[0].clone(), self.num.lo()))
        } else {
            None
        }
    }

    /// If the value is an integer constant, returns it.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        match self.as_monomial() {
            Some((c, 0)) => Some(c),
            _ => None,
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // den / num with the monomial of num moved upstairs
        let lo = self.num.lo();
        let num = self.den.shift(-lo);
        let den = self.num.clone().with_lo(0);
        Ok(Self::fix_sign(num, den))
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
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

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: i64) -> Self {
        RatFunc { num: self.num.shift(e), den: self.den.clone() }
    }

    /// Value at `q = 1`. Because the representation is reduced, a vanishing
    /// denominator means a genuine pole.
    pub fn eval_at_one(&self) -> Result<BigRational> {
        let d = self.den.eval_at_one();
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Ok(BigRational::new(self.num.eval_at_one(), d))
    }

    /// Substitutes `q -> q^{-1}`.
    pub fn invert_variable(&self) -> Self {
        let n = LaurentPoly::from_integral(&self.num).invert_variable();
        let d = LaurentPoly::from_integral(&self.den).invert_variable();
        RatFunc::new(&n, &d).expect("nonzero denominator")
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        let rhs_num = if negate { other.num.neg() } else { other.num.clone() };
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return RatFunc { num: rhs_num, den: other.den.clone() };
        }
        if self.den == other.den {
            let n = self.num.add(&rhs_num);
            if self.den.is_one() {
                return RatFunc { num: n, den: ZLaurent::one() };
            }
            return Self::reduce(n, self.den.clone());
        }
        if self.den.is_one() {
            let n = self.num.mul(&other.den).add(&rhs_num);
            return RatFunc { num: n, den: other.den.clone() };
        }
        if other.den.is_one() {
            let n = self.num.add(&rhs_num.mul(&self.den));
            return RatFunc { num: n, den: self.den.clone() };
        }
        let g = self.den.gcd(&other.den);
        if g.is_one() {
            let n = self.num.mul(&other.den).add(&rhs_num.mul(&self.den));
            let d = self.den.mul(&other.den);
            if n.is_zero() {
                return Self::zero();
            }
            return Self::fix_sign(n, d);
        }
        let b1 = self.den.div_exact(&g).unwrap();
        let d1 = other.den.div_exact(&g).unwrap();
        let n = self.num.mul(&d1).add(&rhs_num.mul(&b1));
        if n.is_zero() {
            return Self::zero();
        }
        let g2 = n.gcd(&g);
        let den = self.den.mul(&d1);
        if g2.is_one() {
            Self::fix_sign(n, den)
        } else {
            Self::fix_sign(n.div_exact(&g2).unwrap(), den.div_exact(&g2).unwrap())
        }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (mut a, mut b) = (self.num.clone(), other.num.clone());
        let (mut da, mut db) = (self.den.clone(), other.den.clone());
        // exact division is far cheaper than a gcd and is the common case
        if !db.is_one() {
            if let Some(x) = a.div_exact(&db) {
                a = x;
                db = ZLaurent::one();
            }
        }
        if !da.is_one() {
            if let Some(x) = b.div_exact(&da) {
                b = x;
                da = ZLaurent::one();
            }
        }
        if !db.is_one() {
            let g = a.gcd(&db);
            if !g.is_one() {
                a = a.div_exact(&g).unwrap();
                db = db.div_exact(&g).unwrap();
            }
        }
        if !da.is_one() {
            let g = b.gcd(&da);
            if !g.is_one() {
                b = b.div_exact(&g).unwrap();
                da = da.div_exact(&g).unwrap();
            }
        }
        Self::fix_sign(a.mul(&b), da.mul(&db))
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for RatFunc {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        self.add_impl(rhs, false)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self.add_impl(rhs, true)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        self.mul_impl(rhs)
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    /// Panics on division by zero; use [`RatFunc::recip`] for a fallible path.
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.mul_impl(&rhs.recip().expect("division by zero rational function"))
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.numer();
        if self.den.is_one() {
            return write!(f, "{n}");
        }
        let d = self.denom();
        let wrap = |p: &LaurentPoly| {
            let s = p.to_string();
            if p.terms().count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(&n), wrap(&d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> RatFunc {
        RatFunc::q_pow(1)
    }

    #[test]
    fn canonical_form_is_structural() {
        let a = &(&q() - &RatFunc::one()) / &(&(&q() * &q()) - &RatFunc::one());
        let b = &RatFunc::one() / &(&q() + &RatFunc::one());
        assert_eq!(a, b);
        let half = RatFunc::from_ratio(&BigRational::new(2.into(), 4.into()));
        assert_eq!(half, &RatFunc::one() / &RatFunc::from_int(2));
    }

    #[test]
    fn eval_qint_at_one() {
        // (q^5 - q^-5)/(q - q^-1)
        let n = &q().pow(5).unwrap() - &q().pow(-5).unwrap();
        let d = &q() - &q().pow(-1).unwrap();
        let v = &n / &d;
        assert!(v.is_laurent());
        assert_eq!(v.eval_at_one().unwrap(), BigRational::from_integer(5.into()));
    }

    #[test]
    fn eval_half() {
        let n = &q() - &q().pow(-1).unwrap();
        let d = &q().pow(2).unwrap() - &q().pow(-2).unwrap();
        assert_eq!((&n / &d).eval_at_one().unwrap(), BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn pole_is_reported() {
        let v = &RatFunc::one() / &(&q() - &RatFunc::one());
        assert!(matches!(v.eval_at_one(), Err(Error::Pole)));
    }

    #[test]
    fn negative_monomial_denominator_moves_up() {
        let v = &RatFunc::one() / &RatFunc::monomial(-2, 3);
        assert_eq!(v.as_monomial(), None);
        assert_eq!(&v * &RatFunc::monomial(-2, 3), RatFunc::one());
        assert_eq!(v.to_string(), "-q^(-3)/2");
    }
}
