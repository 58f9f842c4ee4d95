#![allow(dead_code)]

use etatrace::qseries::QSeries;

/// Coefficients below `n` of `prod_{s in scales} phi(x^s)^power`, by
/// multiplying out `(1 - x^k)` factors one at a time.
pub fn phi_product(scales: &[usize], power: usize, n: usize) -> Vec<i64> {
    let mut acc = vec![0i64; n];
    acc[0] = 1;
    for &s in scales {
        for _ in 0..power {
            let mut k = s;
            while k < n {
                for e in (k..n).rev() {
                    acc[e] -= acc[e - k];
                }
                k += s;
            }
        }
    }
    acc
}

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

/// Partitions counted by largest part.
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

pub fn dense(s: &QSeries, n: usize) -> Vec<i64> {
    let mut out = vec![0i64; n];
    for (e, c) in s.terms() {
        assert!(e.is_integer() && c.is_integer());
        let e: usize = e.to_integer().try_into().unwrap();
        if e < n {
            out[e] = c.to_integer().try_into().unwrap();
        }
    }
    out
}

/// The types exercised by the structural tests.
pub fn all_types() -> Vec<String> {
    let mut v = Vec::new();
    for l in 1..=7 {
        v.push(format!("A{l}"));
    }
    for l in 2..=6 {
        v.push(format!("B{l}"));
        v.push(format!("C{l}"));
    }
    for l in 4..=7 {
        v.push(format!("D{l}"));
    }
    v.extend(["E6", "E7", "E8", "F4", "G2"].map(String::from));
    v
}
