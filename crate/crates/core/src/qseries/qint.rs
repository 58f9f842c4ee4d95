//! Quantum integers, factorials and binomials at `q^d`.

use num_bigint::BigInt;
use num_traits::One;

use super::laurent::LaurentPoly;
use super::zpoly::ZLaurent;
use crate::error::{Error, Result};

/// `[n]_{q^d} = (q^{dn} - q^{-dn}) / (q^d - q^{-d})`, expanded.
pub(crate) fn qnum_z(n: i64, d: i64) -> ZLaurent {
    assert!(d > 0, "q-integer base exponent must be positive");
    if n == 0 {
        return ZLaurent::zero();
    }
    let m = n.abs();
    // q^{d(m-1)} + q^{d(m-3)} + ... + q^{-d(m-1)}
    let len = (2 * d * (m - 1) + 1) as usize;
    let mut c = vec![BigInt::from(0); len];
    let sign = if n > 0 { BigInt::one() } else { -BigInt::one() };
    for k in 0..m {
        c[(2 * d * k) as usize] = sign.clone();
    }
    ZLaurent::from_coeffs(-d * (m - 1), c)
}

/// The q-integer `[n]_{q^d}`.
pub fn qnum(n: i64, d: i64) -> LaurentPoly {
    LaurentPoly::from_integral(&qnum_z(n, d))
}

/// `[n]_{q^d}! = [1][2]...[n]`, with `[0]! = 1`.
pub fn qfactorial(n: u32, d: i64) -> LaurentPoly {
    let mut acc = ZLaurent::one();
    for i in 1..=n as i64 {
        acc = acc.mul(&qnum_z(i, d));
    }
    LaurentPoly::from_integral(&acc)
}

/// Gaussian binomial `[n choose k]_{q^d}`; rejects `k > n`.
pub fn qbinomial(n: i64, k: u32, d: i64) -> Result<LaurentPoly> {
    if n < 0 || k as i64 > n {
        return Err(Error::QBinomialRange { n, k });
    }
    // [n][n-1]...[n-k+1] / [k]!, divided exactly step by step
    let mut acc = ZLaurent::one();
    for i in 0..k as i64 {
        acc = acc.mul(&qnum_z(n - i, d));
        acc = acc.div_exact(&qnum_z(i + 1, d)).expect("q-binomial is a Laurent polynomial");
    }
    Ok(LaurentPoly::from_integral(&acc))
}
