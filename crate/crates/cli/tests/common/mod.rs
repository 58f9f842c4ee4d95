//! Independent reference computations used by the integration tests.
//! Nothing here calls into the engine except to read its output types.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;

/// Cartan matrix and `d` (half the squared root lengths), transcribed by hand.
pub fn cartan(t: &str) -> (Vec<Vec<i64>>, Vec<i64>) {
    match t {
        "A1" => (vec![vec![2]], vec![1]),
        "A2" => (vec![vec![2, -1], vec![-1, 2]], vec![1, 1]),
        "A3" => (vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]], vec![1, 1, 1]),
        "B2" => (vec![vec![2, -1], vec![-2, 2]], vec![2, 1]),
        "G2" => (vec![vec![2, -3], vec![-1, 2]], vec![1, 3]),
        _ => panic!("no reference data for {t}"),
    }
}

pub fn coxeter_number(t: &str) -> i64 {
    match t {
        "A1" => 2,
        "A2" => 3,
        "A3" => 4,
        "B2" => 4,
        "G2" => 6,
        _ => panic!("no reference data for {t}"),
    }
}

/// Braid relation length for simple roots `i`, `j`.
pub fn braid_length(t: &str, i: usize, j: usize) -> usize {
    let (c, _) = cartan(t);
    match c[i][j] * c[j][i] {
        0 => 2,
        1 => 3,
        2 => 4,
        3 => 6,
        _ => unreachable!(),
    }
}

fn r(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `(lambda, mu)` for weights in fundamental-weight coordinates, by solving
/// `C x = lambda` and pairing `sum_j x_j d_j mu_j`.
pub fn pairing(t: &str, lambda: &[i64], mu: &[i64]) -> BigRational {
    let (c, d) = cartan(t);
    let n = c.len();
    let mut a: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| r(c[i][j])).chain([r(lambda[i])]).collect()).collect();
    for col in 0..n {
        let p = (col..n).find(|&k| a[k][col] != r(0)).expect("Cartan matrix is invertible");
        a.swap(col, p);
        let piv = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &piv;
        }
        for k in 0..n {
            if k != col {
                let f = a[k][col].clone();
                for j in 0..=n {
                    let v = &a[col][j] * &f;
                    a[k][j] -= v;
                }
            }
        }
    }
    (0..n).map(|j| &a[j][n] * r(d[j] * mu[j])).sum()
}

pub fn rho(t: &str) -> Vec<i64> {
    vec![1; cartan(t).0.len()]
}

/// `(lambda, lambda + 2 rho)`.
pub fn casimir(t: &str, lambda: &[i64]) -> BigRational {
    let shifted: Vec<i64> = lambda.iter().zip(rho(t)).map(|(a, b)| a + 2 * b).collect();
    pairing(t, lambda, &shifted)
}

/// Coefficients `c_0..c_{n-1}` of `prod_{scale in scales} phi(x^scale)^power`.
pub fn phi_product(scales: &[usize], power: usize, n: usize) -> Vec<i64> {
    let mut acc = vec![0i64; n];
    acc[0] = 1;
    for &s in scales {
        for _ in 0..power {
            let mut k = s;
            while k < n {
                // multiply by (1 - x^k)
                for e in (k..n).rev() {
                    acc[e] -= acc[e - k];
                }
                k += s;
            }
        }
    }
    acc
}

/// Pentagonal number theorem, coefficient list below `n`.
pub fn pentagonal(n: usize) -> Vec<i64> {
    let mut c = vec![0i64; n];
    for k in 0i64.. {
        let a = (k * (3 * k - 1) / 2) as usize;
        if a >= n {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        c[a] += sign;
        let b = (k * (3 * k + 1) / 2) as usize;
        if k > 0 && b < n {
            c[b] += sign;
        }
    }
    c
}

/// `sum_m (-1)^m (2m+1) x^{m(m+1)/2}` below `n`.
pub fn jacobi(n: usize) -> Vec<i64> {
    let mut c = vec![0i64; n];
    for m in 0i64.. {
        let e = (m * (m + 1) / 2) as usize;
        if e >= n {
            break;
        }
        c[e] += if m % 2 == 0 { 2 * m + 1 } else { -(2 * m + 1) };
    }
    c
}

/// Partition numbers by counting with parts of bounded size.
pub fn partitions(n: usize) -> Vec<i64> {
    let mut p = vec![0i64; n];
    p[0] = 1;
    for part in 1..n {
        for total in part..n {
            p[total] += p[total - part];
        }
    }
    p
}

/// Dense integer coefficient list of a series with integral exponents.
pub fn dense(s: &etatrace::qseries::QSeries, n: usize) -> Vec<i64> {
    let mut out = vec![0i64; n];
    for (e, c) in s.terms() {
        assert!(e.is_integer(), "non-integral exponent {e}");
        assert!(c.is_integer(), "non-integral coefficient {c}");
        let e: usize = e.to_integer().try_into().expect("exponent fits");
        if e < n {
            out[e] = c.to_integer().try_into().expect("coefficient fits");
        }
    }
    out
}
