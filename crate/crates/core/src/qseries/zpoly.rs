//! Dense Laurent polynomials with integer coefficients.
//!
//! This is the hot-path representation behind [`RatFunc`](super::RatFunc).
//! A value is stored as `q^lo * (c[0] + c[1] q + ... )` with `c[0] != 0`
//! and a nonzero top coefficient, so the polynomial part is never divisible
//! by `q` and the monomial factor never takes part in gcd computations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub(crate) struct ZLaurent {
    lo: i64,
    c: Vec<BigInt>,
}

impl ZLaurent {
    pub fn zero() -> Self {
        ZLaurent { lo: 0, c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(v: BigInt) -> Self {
        Self::monomial(v, 0)
    }

    pub fn monomial(v: BigInt, exp: i64) -> Self {
        if v.is_zero() {
            Self::zero()
        } else {
            ZLaurent { lo: exp, c: vec![v] }
        }
    }

    /// Builds from `q^lo * sum c[k] q^k`, trimming zeros at both ends.
    pub fn from_coeffs(lo: i64, mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        let lead = c.iter().take_while(|x| x.is_zero()).count();
        if lead == c.len() {
            return Self::zero();
        }
        if lead > 0 {
            c.drain(..lead);
        }
        ZLaurent { lo: lo + lead as i64, c }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.lo == 0 && self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.c.len() == 1
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    /// Highest exponent; meaningless for zero.
    pub fn hi(&self) -> i64 {
        self.lo + self.c.len() as i64 - 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(k, v)| (self.lo + k as i64, v))
    }

    pub fn shift(&self, e: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        ZLaurent { lo: self.lo + e, c: self.c.clone() }
    }

    pub fn with_lo(mut self, lo: i64) -> Self {
        if !self.is_zero() {
            self.lo = lo;
        }
        self
    }

    pub fn neg(&self) -> Self {
        ZLaurent { lo: self.lo, c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let mut c = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (k, v) in self.c.iter().enumerate() {
            c[(self.lo - lo) as usize + k] += v;
        }
        let off = (other.lo - lo) as usize;
        for (k, v) in other.c.iter().enumerate() {
            c[off + k] += v;
        }
        Self::from_coeffs(lo, c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        ZLaurent { lo: self.lo + other.lo, c: poly_mul(&self.c, &other.c) }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        ZLaurent { lo: self.lo, c: self.c.iter().map(|x| x * k).collect() }
    }

    /// Exact quotient of the polynomial parts; the monomial factors divide as
    /// units. Returns `None` if the division is not exact over Z.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        assert!(!other.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let q = poly_div_exact(&self.c, &other.c)?;
        Some(Self::from_coeffs(self.lo - other.lo, q))
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.c.iter().sum()
    }

    /// Polynomial gcd of the `q`-free parts, normalized with a positive
    /// constant term. The result has `lo == 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        ZLaurent::from_coeffs(0, poly_gcd(&self.c, &other.c))
    }

    pub fn constant_term_sign(&self) -> Ordering {
        match self.c.first() {
            None => Ordering::Equal,
            Some(v) => v.sign().cmp(&num_bigint::Sign::NoSign),
        }
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.len() == 1 {
        return b.iter().map(|x| x * &a[0]).collect();
    }
    if b.len() == 1 {
        return a.iter().map(|x| x * &b[0]).collect();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn content(c: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for x in c {
        if x.is_zero() {
            continue;
        }
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    g
}

fn trim(mut c: Vec<BigInt>) -> Vec<BigInt> {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    c
}

/// Strips factors of `q` (leading zero coefficients).
fn strip_low(mut c: Vec<BigInt>) -> Vec<BigInt> {
    let lead = c.iter().take_while(|x| x.is_zero()).count();
    c.drain(..lead);
    c
}

/// Exact division of ordinary polynomials over Z (coefficients low to high).
fn poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    if a.len() < b.len() {
        return None;
    }
    if b.len() == 1 {
        let d = &b[0];
        let mut out = Vec::with_capacity(a.len());
        for x in a {
            let (q, r) = x.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        return Some(out);
    }
    let mut r: Vec<BigInt> = a.to_vec();
    let n = b.len() - 1;
    let lead = &b[n];
    let mut q = vec![BigInt::zero(); a.len() - n];
    for k in (0..q.len()).rev() {
        let top = &r[k + n];
        if top.is_zero() {
            continue;
        }
        let (qq, rem) = top.div_rem(lead);
        if !rem.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                r[k + j] -= &qq * bj;
            }
        }
        q[k] = qq;
    }
    if r.iter().all(|x| x.is_zero()) {
        Some(q)
    } else {
        None
    }
}

/// Pseudo-remainder of `a` by `b` (deg a >= deg b).
fn poly_prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = b.len() - 1;
    let lead = &b[n];
    let mut r: Vec<BigInt> = a.to_vec();
    while r.len() > n && !r.is_empty() {
        let m = r.len() - 1;
        let top = r[m].clone();
        if top.is_zero() {
            r.pop();
            continue;
        }
        let shift = m - n;
        for x in r.iter_mut() {
            *x *= lead;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                r[shift + j] -= &top * bj;
            }
        }
        r = trim(r);
    }
    r
}

fn primitive(c: Vec<BigInt>) -> Vec<BigInt> {
    let g = content(&c);
    if g.is_one() || g.is_zero() {
        c
    } else {
        c.into_iter().map(|x| x / &g).collect()
    }
}

fn normalize_sign(mut c: Vec<BigInt>) -> Vec<BigInt> {
    if c.first().is_some_and(|x| x.is_negative()) {
        for x in c.iter_mut() {
            *x = -&*x;
        }
    }
    c
}

/// Gcd over Z[q] of two polynomials with nonzero constant terms, by the
/// primitive remainder sequence. Result has a positive constant term.
fn poly_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() {
        return normalize_sign(b.to_vec());
    }
    if b.is_empty() {
        return normalize_sign(a.to_vec());
    }
    let ca = content(a);
    let cb = content(b);
    let g = ca.gcd(&cb);
    if a.len() == 1 || b.len() == 1 {
        return vec![g];
    }
    if a == b {
        return normalize_sign(a.to_vec());
    }
    let (mut x, mut y) = if a.len() >= b.len() {
        (primitive(a.to_vec()), primitive(b.to_vec()))
    } else {
        (primitive(b.to_vec()), primitive(a.to_vec()))
    };
    // Frequent case: one side divides the other.
    if poly_div_exact(&x, &y).is_some() {
        return normalize_sign(y.into_iter().map(|v| v * &g).collect());
    }
    loop {
        let r = strip_low(poly_prem(&x, &y));
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            return vec![g];
        }
        x = y;
        y = primitive(r);
        if x.len() < y.len() {
            std::mem::swap(&mut x, &mut y);
        }
    }
    normalize_sign(y.into_iter().map(|v| v * &g).collect())
}
