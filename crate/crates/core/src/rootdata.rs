//! Root systems of the simple Lie types in Bourbaki numbering.
//!
//! Weights are integer vectors in the basis of fundamental weights; roots
//! are integer vectors in the basis of simple roots.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fraction::{int, Rational};

/// Fundamental-weight coordinates.
pub type Weight = Vec<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LieType {
    pub family: Family,
    pub rank: usize,
}

impl LieType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(LieType { family, rank })
        } else {
            Err(Error::InvalidLieType(format!("{family:?}{rank}")))
        }
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.family, Family::A | Family::D | Family::E)
    }
}

impl FromStr for LieType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::InvalidLieType(s.to_string());
        let mut chars = t.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        LieType::new(family, rank)
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl Serialize for LieType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parses comma-separated coordinates such as `"1,1"`.
pub fn parse_weight(s: &str) -> Result<Weight> {
    s.split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|_| Error::InvalidWeight(s.to_string())))
        .collect()
}

pub fn fmt_weight(w: &[i64]) -> String {
    w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    pub lie_type: LieType,
    /// `cartan[i][j] = 2(a_i, a_j)/(a_i, a_i)`.
    pub cartan: Vec<Vec<i64>>,
    /// `(a_i, a_i) = 2 d_i`.
    pub d: Vec<i64>,
    /// `sym[i][j] = d_i cartan[i][j] = (a_i, a_j)`.
    pub sym: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates, sorted by height then
    /// coordinates; the simple roots come first.
    pub positive_roots: Vec<Vec<i64>>,
    pub rho: Weight,
    pub h: i64,
    pub k: Rational,
    pub rg: Rational,
    cartan_inv: Vec<Vec<Rational>>,
}

fn cartan_matrix(t: LieType) -> Vec<Vec<i64>> {
    let l = t.rank;
    let mut c = vec![vec![0i64; l]; l];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        c[i][j] = -1;
        c[j][i] = -1;
    };
    match t.family {
        Family::A | Family::B | Family::C | Family::F | Family::G => {
            for i in 0..l - 1 {
                link(i, i + 1);
            }
        }
        Family::D => {
            for i in 0..l - 2 {
                link(i, i + 1);
            }
            link(l - 3, l - 1);
        }
        Family::E => {
            link(0, 2);
            link(1, 3);
            for i in 2..l - 1 {
                link(i, i + 1);
            }
        }
    }
    match t.family {
        Family::B => c[l - 1][l - 2] = -2,
        Family::C => c[l - 2][l - 1] = -2,
        Family::F => c[2][1] = -2,
        Family::G => c[0][1] = -3,
        _ => {}
    }
    c
}

fn symmetrizer(t: LieType) -> Vec<i64> {
    let l = t.rank;
    match t.family {
        Family::A | Family::D | Family::E => vec![1; l],
        Family::B => (0..l).map(|i| if i + 1 == l { 1 } else { 2 }).collect(),
        Family::C => (0..l).map(|i| if i + 1 == l { 2 } else { 1 }).collect(),
        Family::F => vec![2, 2, 1, 1],
        Family::G => vec![1, 3],
    }
}

/// `(h, k)` from the standard table.
fn table_constants(t: LieType) -> (i64, Rational) {
    let l = t.rank as i64;
    match t.family {
        Family::A => (l + 1, int(2 * (l + 1))),
        Family::B => (2 * l, int(4 * l - 2)),
        Family::C => (2 * l, int(4 * l + 4)),
        Family::D => (2 * l - 2, int(4 * l - 4)),
        Family::E => match l {
            6 => (12, int(24)),
            7 => (18, int(36)),
            _ => (30, int(60)),
        },
        Family::F => (12, int(18)),
        Family::G => (6, int(24)),
    }
}

fn invert(m: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Rational> = row.iter().map(|&x| int(x)).collect();
            r.extend((0..n).map(|j| if i == j { int(1) } else { int(0) }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero()).expect("Cartan matrix is invertible");
        a.swap(col, p);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot) {
                    *x -= &f * y;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

impl RootDatum {
    pub fn new(t: LieType) -> Self {
        let cartan = cartan_matrix(t);
        let d = symmetrizer(t);
        let l = t.rank;
        let sym: Vec<Vec<i64>> = (0..l).map(|i| (0..l).map(|j| d[i] * cartan[i][j]).collect()).collect();
        let (h, k) = table_constants(t);
        let rg = &k / int(h);
        let cartan_inv = invert(&cartan);
        let mut datum = RootDatum {
            lie_type: t,
            cartan,
            d,
            sym,
            positive_roots: Vec::new(),
            rho: vec![1; l],
            h,
            k,
            rg,
            cartan_inv,
        };
        datum.positive_roots = datum.generate_positive_roots();
        datum
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(Self::new(s.parse()?))
    }

    pub fn rank(&self) -> usize {
        self.lie_type.rank
    }

    pub fn dim_g(&self) -> usize {
        self.rank() + 2 * self.positive_roots.len()
    }

    /// `<beta, a_i^vee>` for `beta` in root coordinates.
    pub fn root_pairing(&self, beta: &[i64], i: usize) -> i64 {
        (0..self.rank()).map(|j| beta[j] * self.cartan[i][j]).sum()
    }

    fn generate_positive_roots(&self) -> Vec<Vec<i64>> {
        let l = self.rank();
        let simple: Vec<Vec<i64>> = (0..l).map(|i| (0..l).map(|j| i64::from(i == j)).collect()).collect();
        let mut known: BTreeSet<Vec<i64>> = simple.iter().cloned().collect();
        let mut order = simple.clone();
        let mut queue: VecDeque<Vec<i64>> = simple.into();
        while let Some(beta) = queue.pop_front() {
            for i in 0..l {
                // a_i string through beta: beta - p a_i .. beta + q a_i, p - q = <beta, a_i^vee>
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if known.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let is_simple_i = beta.iter().enumerate().all(|(j, &x)| x == i64::from(i == j));
                if is_simple_i {
                    continue;
                }
                if p - self.root_pairing(&beta, i) > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        order.push(up.clone());
                        queue.push_back(up);
                    }
                }
            }
        }
        order.sort_by_key(|r| (r.iter().sum::<i64>(), std::cmp::Reverse(r.clone())));
        order
    }

    pub fn highest_root(&self) -> &[i64] {
        self.positive_roots.last().expect("nonempty root system")
    }

    /// Converts simple-root coordinates to fundamental-weight coordinates.
    pub fn root_to_weight(&self, x: &[i64]) -> Weight {
        let l = self.rank();
        (0..l).map(|j| (0..l).map(|i| x[i] * self.cartan[j][i]).sum()).collect()
    }

    /// Simple-root coordinates of a weight (rational in general).
    pub fn weight_to_root(&self, w: &[i64]) -> Result<Vec<Rational>> {
        self.check_len(w)?;
        let l = self.rank();
        Ok((0..l)
            .map(|i| (0..l).fold(Rational::zero(), |acc, j| acc + &self.cartan_inv[i][j] * int(w[j])))
            .collect())
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        (0..self.rank()).map(|j| self.cartan[j][i]).collect()
    }

    fn check_len(&self, w: &[i64]) -> Result<()> {
        if w.len() == self.rank() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.rank(), got: w.len() })
        }
    }

    /// `(x, y)` for two weights in fundamental-weight coordinates.
    pub fn inner(&self, x: &[i64], y: &[i64]) -> Result<Rational> {
        self.check_len(y)?;
        let xr = self.weight_to_root(x)?;
        Ok(xr.iter().enumerate().fold(Rational::zero(), |acc, (i, c)| acc + c * int(self.d[i] * y[i])))
    }

    /// `(x, y)` for two vectors in simple-root coordinates.
    pub fn inner_roots(&self, x: &[i64], y: &[i64]) -> Result<i64> {
        self.check_len(x)?;
        self.check_len(y)?;
        let l = self.rank();
        Ok((0..l).map(|i| (0..l).map(|j| x[i] * self.sym[i][j] * y[j]).sum::<i64>()).sum())
    }

    /// `(beta, mu)` for a root-coordinate `beta` and a weight `mu`; always an integer.
    pub fn inner_root_weight(&self, beta: &[i64], mu: &[i64]) -> i64 {
        (0..self.rank()).map(|i| beta[i] * self.d[i] * mu[i]).sum()
    }

    pub fn is_dominant(&self, w: &[i64]) -> bool {
        w.len() == self.rank() && w.iter().all(|&x| x >= 0)
    }

    pub fn check_dominant(&self, w: &[i64]) -> Result<()> {
        self.check_len(w)?;
        if self.is_dominant(w) {
            Ok(())
        } else {
            Err(Error::InvalidWeight(format!("{} is not dominant", fmt_weight(w))))
        }
    }

    /// `(lambda, lambda + 2 rho)`.
    pub fn casimir(&self, w: &[i64]) -> Result<Rational> {
        let two_rho: Weight = self.rho.iter().map(|x| 2 * x).collect();
        let s: Weight = w.iter().zip(&two_rho).map(|(a, b)| a + b).collect();
        self.inner(w, &s)
    }

    /// `(lambda, lambda + 2 rho) / h`.
    pub fn trace_exponent(&self, w: &[i64]) -> Result<Rational> {
        Ok(self.casimir(w)? / int(self.h))
    }

    /// `c(lambda) = (lambda, lambda + 2 rho) / k`.
    pub fn c_lambda(&self, w: &[i64]) -> Result<Rational> {
        Ok(self.casimir(w)? / &self.k)
    }

    /// Weyl dimension formula.
    pub fn weyl_dim(&self, w: &[i64]) -> Result<u64> {
        self.check_dominant(w)?;
        let lr: Weight = w.iter().zip(&self.rho).map(|(a, b)| a + b).collect();
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for beta in &self.positive_roots {
            num *= self.inner_root_weight(beta, &lr);
            den *= self.inner_root_weight(beta, &self.rho);
        }
        let q = Rational::new(num, den);
        assert!(q.is_integer(), "Weyl dimension is an integer");
        u64::try_from(q.to_integer()).map_err(|_| Error::Internal("dimension overflow".into()))
    }

    /// Weight multiplicities of `V(lambda)` by Freudenthal's recursion.
    pub fn freudenthal_multiplicities(&self, lambda: &[i64]) -> Result<BTreeMap<Weight, u64>> {
        self.check_dominant(lambda)?;
        let l = self.rank();
        let lr: Weight = lambda.iter().zip(&self.rho).map(|(a, b)| a + b).collect();
        // depth vectors nu with mu = lambda - nu (nu in root coordinates)
        let mut mult: HashMap<Vec<i64>, i64> = HashMap::new();
        mult.insert(vec![0; l], 1);
        let mut level: BTreeSet<Vec<i64>> = [vec![0; l]].into();
        while !level.is_empty() {
            let mut next = BTreeSet::new();
            for nu in &level {
                for i in 0..l {
                    let mut c = nu.clone();
                    c[i] += 1;
                    next.insert(c);
                }
            }
            let mut kept = BTreeSet::new();
            for nu in next {
                // (lambda+rho)^2 - (mu+rho)^2 = 2(lambda+rho, nu) - (nu, nu)
                let denom = 2 * self.inner_root_weight(&nu, &lr) - self.inner_roots(&nu, &nu)?;
                if denom <= 0 {
                    continue;
                }
                let mu = self.weight_of_depth(lambda, &nu);
                let mut sum = 0i64;
                for beta in &self.positive_roots {
                    let bb = self.inner_roots(beta, beta)?;
                    let mb = self.inner_root_weight(beta, &mu);
                    let mut up = nu.clone();
                    for kk in 1.. {
                        for (u, b) in up.iter_mut().zip(beta) {
                            *u -= b;
                        }
                        if up.iter().any(|&x| x < 0) {
                            break;
                        }
                        if let Some(m) = mult.get(&up) {
                            sum += m * (mb + kk * bb);
                        }
                    }
                }
                if sum == 0 {
                    continue;
                }
                let m2 = 2 * sum;
                if m2 % denom != 0 {
                    return Err(Error::Internal("Freudenthal recursion produced a fraction".into()));
                }
                mult.insert(nu.clone(), m2 / denom);
                kept.insert(nu);
            }
            level = kept;
        }
        Ok(mult.into_iter().map(|(nu, m)| (self.weight_of_depth(lambda, &nu), m as u64)).collect())
    }

    /// `lambda - nu` with `nu` in root coordinates.
    pub fn weight_of_depth(&self, lambda: &[i64], nu: &[i64]) -> Weight {
        let shift = self.root_to_weight(nu);
        lambda.iter().zip(shift).map(|(a, b)| a - b).collect()
    }

    pub fn in_root_lattice(&self, w: &[i64]) -> bool {
        self.weight_to_root(w).map(|x| x.iter().all(|c| c.is_integer())).unwrap_or(false)
    }

    /// `s_i(mu) = mu - <mu, a_i^vee> a_i`.
    pub fn reflect(&self, i: usize, mu: &[i64]) -> Weight {
        let m = mu[i];
        mu.iter().enumerate().map(|(j, &x)| x - m * self.cartan[j][i]).collect()
    }

    /// `s_1 s_2 ... s_l (mu)`, with `s_l` applied first.
    pub fn coxeter_action_on_weights(&self, mu: &[i64]) -> Weight {
        (0..self.rank()).rev().fold(mu.to_vec(), |acc, i| self.reflect(i, &acc))
    }

    pub fn weyl_orbit(&self, mu: &[i64]) -> BTreeSet<Weight> {
        let mut seen: BTreeSet<Weight> = [mu.to_vec()].into();
        let mut queue: VecDeque<Weight> = [mu.to_vec()].into();
        while let Some(x) = queue.pop_front() {
            for i in 0..self.rank() {
                let y = self.reflect(i, &x);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// All dominant `lambda` with `(lambda, lambda + 2 rho)/h < cutoff`, in
    /// lexicographic order of coordinates.
    pub fn enumerate_contributing_weights(&self, cutoff: &Rational) -> Result<Vec<Weight>> {
        self.enumerate_below(&(cutoff * int(self.h)))
    }

    /// All dominant `lambda` with `(lambda, lambda + 2 rho) < bound`.
    pub fn enumerate_below(&self, bound: &Rational) -> Result<Vec<Weight>> {
        let mut out = Vec::new();
        let mut cur = vec![0i64; self.rank()];
        self.enumerate_rec(0, &mut cur, bound, &mut out)?;
        out.sort();
        Ok(out)
    }

    // Every fundamental-weight Gram entry is positive, so the Casimir value
    // grows in each coordinate and a depth-first scan may stop early.
    fn enumerate_rec(&self, pos: usize, cur: &mut Weight, bound: &Rational, out: &mut Vec<Weight>) -> Result<()> {
        if pos == cur.len() {
            if self.casimir(cur)? < *bound {
                out.push(cur.clone());
            }
            return Ok(());
        }
        loop {
            if self.casimir(cur)? >= *bound {
                break;
            }
            self.enumerate_rec(pos + 1, cur, bound, out)?;
            cur[pos] += 1;
        }
        cur[pos] = 0;
        Ok(())
    }

    /// All dominant `lambda` with `dim V(lambda) <= max_dim`, sorted by
    /// dimension then coordinates. The Weyl dimension grows in each coordinate.
    pub fn dominant_weights_up_to_dim(&self, max_dim: u64) -> Result<Vec<Weight>> {
        let mut out = Vec::new();
        let mut cur = vec![0i64; self.rank()];
        self.dim_rec(0, &mut cur, max_dim, &mut out)?;
        let mut keyed: Vec<(u64, Weight)> = out.into_iter().map(|w| Ok((self.weyl_dim(&w)?, w))).collect::<Result<_>>()?;
        keyed.sort();
        Ok(keyed.into_iter().map(|(_, w)| w).collect())
    }

    fn dim_rec(&self, pos: usize, cur: &mut Weight, max_dim: u64, out: &mut Vec<Weight>) -> Result<()> {
        if pos == cur.len() {
            out.push(cur.clone());
            return Ok(());
        }
        while self.weyl_dim(cur)? <= max_dim {
            self.dim_rec(pos + 1, cur, max_dim, out)?;
            cur[pos] += 1;
        }
        cur[pos] = 0;
        Ok(())
    }

    /// Leading principal minors of the symmetrized matrix.
    pub fn leading_minors(&self) -> Vec<Rational> {
        let l = self.rank();
        (1..=l)
            .map(|n| {
                let m: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|j| int(self.sym[i][j])).collect()).collect();
                det(m)
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Dump<'a> {
            #[serde(rename = "type")]
            lie_type: LieType,
            cartan: &'a [Vec<i64>],
            d: &'a [i64],
            positive_roots: &'a [Vec<i64>],
            h: String,
            k: String,
            r_g: String,
        }
        serde_json::to_value(Dump {
            lie_type: self.lie_type,
            cartan: &self.cartan,
            d: &self.d,
            positive_roots: &self.positive_roots,
            h: self.h.to_string(),
            k: self.k.to_string(),
            r_g: self.rg.to_string(),
        })
        .expect("serializable")
    }
}

fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut acc = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            acc = -acc;
        }
        acc *= &m[col][col];
        for r in col + 1..n {
            let f = &m[r][col] / &m[col][col];
            let pivot = m[col].clone();
            for (x, y) in m[r].iter_mut().zip(pivot) {
                *x -= &f * y;
            }
        }
    }
    acc
}
