//! Exact sparse and dense linear algebra over a field.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fraction::Rational;
use crate::qseries::RatFunc;

/// Exact field used for module matrices.
pub trait Field: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Panics on zero.
    fn inv(&self) -> Self;
    fn from_i64(v: i64) -> Self;

    fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip().expect("inverse of zero")
    }
    fn from_i64(v: i64) -> Self {
        RatFunc::from_int(v)
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_one(&self) -> bool {
        RatFunc::is_one(self)
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(v.into())
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
}

/// Sparse vector: sorted `(index, value)` pairs with no zeros.
pub type SparseVec<T> = BTreeMap<usize, T>;

fn accumulate<T: Field>(v: &mut SparseVec<T>, i: usize, x: T) {
    if x.is_zero() {
        return;
    }
    match v.entry(i) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(x);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().add(&x);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

/// Row-major sparse matrix; each row stores its nonzero entries sorted by column.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, T)>>,
}

impl<T: Field> SparseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal((0..n).map(|_| T::one()).collect())
    }

    pub fn diagonal(d: Vec<T>) -> Self {
        let n = d.len();
        let data = d.into_iter().enumerate().map(|(i, x)| if x.is_zero() { vec![] } else { vec![(i, x)] }).collect();
        SparseMatrix { rows: n, cols: n, data }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets<I: IntoIterator<Item = (usize, usize, T)>>(rows: usize, cols: usize, it: I) -> Self {
        let mut acc: Vec<SparseVec<T>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in it {
            assert!(r < rows && c < cols, "triplet out of range");
            accumulate(&mut acc[r], c, v);
        }
        SparseMatrix { rows, cols, data: acc.into_iter().map(|m| m.into_iter().collect()).collect() }
    }

    /// Builds from sparse columns.
    pub fn from_columns(rows: usize, cols: &[SparseVec<T>]) -> Self {
        Self::from_triplets(
            rows,
            cols.len(),
            cols.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v.clone()))),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(usize, T)] {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        match self.data[r].binary_search_by_key(&c, |(j, _)| *j) {
            Ok(p) => self.data[r][p].1.clone(),
            Err(_) => T::zero(),
        }
    }

    /// Nonzero entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        self.data.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn column(&self, c: usize) -> SparseVec<T> {
        let mut out = BTreeMap::new();
        for (r, row) in self.data.iter().enumerate() {
            if let Ok(p) = row.binary_search_by_key(&c, |(j, _)| *j) {
                out.insert(r, row[p].1.clone());
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.triplets().map(|(r, c, v)| (c, r, v.clone())))
    }

    pub fn scale(&self, k: &T) -> Self {
        if k.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let data = self.data.iter().map(|row| row.iter().map(|(c, v)| (*c, v.mul(k))).collect()).collect();
        SparseMatrix { rows: self.rows, cols: self.cols, data }
    }

    fn check_same_shape(&self, o: &Self) -> Result<()> {
        if self.rows != o.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, got: o.rows });
        }
        if self.cols != o.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: o.cols });
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_same_shape(o)?;
        Ok(self.combine(o, false))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check_same_shape(o)?;
        Ok(self.combine(o, true))
    }

    fn combine(&self, o: &Self, negate: bool) -> Self {
        let data = self
            .data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| {
                let mut row: SparseVec<T> = a.iter().cloned().collect();
                for (c, v) in b {
                    accumulate(&mut row, *c, if negate { v.neg() } else { v.clone() });
                }
                row.into_iter().collect()
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: o.rows });
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: SparseVec<T> = BTreeMap::new();
                for (k, a) in row {
                    for (j, b) in &o.data[*k] {
                        accumulate(&mut acc, *j, a.mul(b));
                    }
                }
                acc.into_iter().collect()
            })
            .collect();
        Ok(SparseMatrix { rows: self.rows, cols: o.cols, data })
    }

    /// Product of a chain, left to right.
    pub fn product<'a, I: IntoIterator<Item = &'a Self>>(n: usize, it: I) -> Result<Self>
    where
        T: 'a,
    {
        it.into_iter().try_fold(Self::identity(n), |acc, m| acc.mul(m))
    }

    pub fn pow(&self, mut e: u64) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let mut acc = Self::identity(self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b)?;
            }
        }
        Ok(acc)
    }

    pub fn apply(&self, v: &SparseVec<T>) -> SparseVec<T> {
        let mut out = BTreeMap::new();
        for (r, row) in self.data.iter().enumerate() {
            let mut s = T::zero();
            for (c, a) in row {
                if let Some(x) = v.get(c) {
                    s = s.add(&a.mul(x));
                }
            }
            if !s.is_zero() {
                out.insert(r, s);
            }
        }
        out
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc.add(&self.get(i, i)))
    }

    /// The submatrix on the given rows and columns.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> Self {
        let cpos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(p, c)| (*c, p)).collect();
        let data = rows
            .iter()
            .map(|&r| self.data[r].iter().filter_map(|(c, v)| cpos.get(c).map(|p| (*p, v.clone()))).collect())
            .collect();
        SparseMatrix { rows: rows.len(), cols: cols.len(), data }
    }

    /// True if every entry outside the `rows x cols` block is zero within the
    /// given columns, i.e. the span of `cols` maps into the span of `rows`.
    pub fn maps_into(&self, cols: &[usize], rows: &[usize]) -> bool {
        let cset: std::collections::BTreeSet<usize> = cols.iter().copied().collect();
        let rset: std::collections::BTreeSet<usize> = rows.iter().copied().collect();
        self.triplets().all(|(r, c, _)| !cset.contains(&c) || rset.contains(&r))
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> SparseMatrix<U> {
        SparseMatrix::from_triplets(self.rows, self.cols, self.triplets().map(|(r, c, v)| (r, c, f(v))))
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut d = vec![vec![T::zero(); self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            d[r][c] = v.clone();
        }
        d
    }

    pub fn from_dense(d: &[Vec<T>]) -> Self {
        let cols = d.first().map_or(0, Vec::len);
        Self::from_triplets(
            d.len(),
            cols,
            d.iter().enumerate().flat_map(|(r, row)| row.iter().enumerate().map(move |(c, v)| (r, c, v.clone()))),
        )
    }

    /// Inverse, computed blockwise on the connected components of the
    /// row/column incidence graph.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::NotInvertible("matrix is not square".into()));
        }
        let n = self.rows;
        // union-find over rows (0..n) and columns (n..2n)
        let mut parent: Vec<usize> = (0..2 * n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for (r, c, _) in self.triplets() {
            let (a, b) = (find(&mut parent, r), find(&mut parent, n + c));
            if a != b {
                parent[a] = b;
            }
        }
        let mut comps: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for r in 0..n {
            let root = find(&mut parent, r);
            comps.entry(root).or_default().0.push(r);
        }
        for c in 0..n {
            let root = find(&mut parent, n + c);
            comps.entry(root).or_default().1.push(c);
        }
        let mut trip = Vec::new();
        for (rows, cols) in comps.values() {
            if rows.len() != cols.len() {
                return Err(Error::NotInvertible("singular block structure".into()));
            }
            let block = self.restrict(rows, cols).to_dense();
            let inv = dense_inverse(&block)?;
            // inverse maps the row space back to the column space
            for (i, row) in inv.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    if !v.is_zero() {
                        trip.push((cols[i], rows[j], v.clone()));
                    }
                }
            }
        }
        Ok(Self::from_triplets(n, n, trip))
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<T: Field>(m: &mut [Vec<T>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for x in m[r].iter_mut() {
            if !x.is_zero() {
                *x = x.mul(&inv);
            }
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (pivot, other) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (x, y) in other.iter_mut().zip(pivot.iter()) {
                    if !y.is_zero() {
                        *x = x.sub(&f.mul(y));
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: Field>(m: &[Vec<T>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// Basis of the right null space `{x : m x = 0}`, one vector per free
/// column, with a 1 in that column (the lexicographically pivoted basis).
pub fn null_space<T: Field>(m: &[Vec<T>], cols: usize) -> Vec<Vec<T>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); cols];
            v[f] = T::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = a[r][f].neg();
            }
            v
        })
        .collect()
}

pub fn dense_inverse<T: Field>(m: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let n = m.len();
    let mut a: Vec<Vec<T>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut a);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::NotInvertible("singular matrix".into()));
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn dense_mul<T: Field>(a: &[Vec<T>], b: &[Vec<T>]) -> Vec<Vec<T>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(T::zero(), |acc, k| if row[k].is_zero() { acc } else { acc.add(&row[k].mul(&b[k][j])) }))
                .collect()
        })
        .collect()
}

/// Incremental echelon basis used to test membership in a growing span and
/// to express members in terms of the accepted generators.
#[derive(Clone, Debug)]
pub struct IncrementalSpan<T> {
    /// Reduced rows: pivot column, row, and its expression in accepted generators.
    rows: Vec<(usize, SparseVec<T>, SparseVec<T>)>,
    accepted: usize,
}

impl<T: Field> Default for IncrementalSpan<T> {
    fn default() -> Self {
        IncrementalSpan { rows: Vec::new(), accepted: 0 }
    }
}

impl<T: Field> IncrementalSpan<T> {
    pub fn len(&self) -> usize {
        self.accepted
    }

    pub fn is_empty(&self) -> bool {
        self.accepted == 0
    }

    fn reduce(&self, v: &SparseVec<T>) -> (SparseVec<T>, SparseVec<T>) {
        let mut rem = v.clone();
        let mut expr: SparseVec<T> = BTreeMap::new();
        for (p, row, e) in &self.rows {
            let Some(c) = rem.get(p).cloned() else { continue };
            for (j, x) in row {
                accumulate(&mut rem, *j, c.mul(x).neg());
            }
            for (j, x) in e {
                accumulate(&mut expr, *j, c.mul(x));
            }
        }
        (rem, expr)
    }

    /// Either accepts `v` as a new generator (returning `Err(index)`), or
    /// returns `Ok(coefficients)` expressing it in the accepted generators.
    pub fn insert_or_express(&mut self, v: &SparseVec<T>) -> std::result::Result<SparseVec<T>, usize> {
        let (rem, expr) = self.reduce(v);
        if rem.is_empty() {
            return Ok(expr);
        }
        let idx = self.accepted;
        self.accepted += 1;
        let (&p, lead) = rem.iter().next().map(|(p, l)| (p, l.clone())).unwrap();
        let inv = lead.inv();
        let row: SparseVec<T> = rem.iter().map(|(j, x)| (*j, x.mul(&inv))).collect();
        // new row = (v - sum expr_k g_k) / lead, so its expression is (e_idx - expr)/lead
        let mut e: SparseVec<T> = expr.iter().map(|(j, x)| (*j, x.neg().mul(&inv))).collect();
        e.insert(idx, inv);
        // keep previous rows reduced against the new pivot
        for (_, r, re) in self.rows.iter_mut() {
            if let Some(c) = r.get(&p).cloned() {
                for (j, x) in &row {
                    accumulate(r, *j, c.mul(x).neg());
                }
                for (j, x) in &e {
                    accumulate(re, *j, c.mul(x).neg());
                }
            }
        }
        self.rows.push((p, row, e));
        Err(idx)
    }
}
