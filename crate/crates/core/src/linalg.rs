//! Exact linear algebra over [`Rational`].
//!
//! Three matrix shapes coexist:
//! * [`Matrix`] — the general value type, dense below [`DENSE_LIMIT`] columns and
//!   row-sparse from there on;
//! * [`SparseOp`] — a column-major sparse operator, the workhorse for
//!   derivations, representations and ad-matrices (column `k` is the image of
//!   basis vector `k`);
//! * [`SparseVec`] — sorted coordinate lists.
//!
//! Signatures come from congruence diagonalization, never from eigenvalues.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::scalar::Rational;

/// Column count from which [`Matrix`] switches to sparse storage.
pub const DENSE_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("vectors are linearly dependent")]
    Dependent,
    #[error("gram matrix is not {0}")]
    Symmetry(&'static str),
}

// ---------------------------------------------------------------------------
// Sparse vectors

/// A sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Rational)>,
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter().map(|(i, v)| (i, v))).finish()
    }
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    /// The basis vector `e_i`.
    pub fn unit(i: usize) -> Self {
        Self { entries: vec![(i, Rational::one())] }
    }

    /// `c·e_i` (empty when `c = 0`).
    pub fn single(i: usize, c: Rational) -> Self {
        if c.is_zero() {
            Self::new()
        } else {
            Self { entries: vec![(i, c)] }
        }
    }

    pub fn from_dense(v: &[Rational]) -> Self {
        Self {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        }
    }

    /// Builds from arbitrary `(index, value)` pairs, summing duplicates.
    pub fn from_entries(mut pairs: Vec<(usize, Rational)>) -> Self {
        pairs.sort_by_key(|p| p.0);
        let mut entries: Vec<(usize, Rational)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            match entries.last_mut() {
                Some((j, w)) if *j == i => *w += v,
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|(_, v)| !v.is_zero());
        Self { entries }
    }

    /// Wraps already sorted, zero-free entries.
    pub fn from_sorted_unchecked(entries: Vec<(usize, Rational)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|(_, v)| !v.is_zero()));
        Self { entries }
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, Rational)> {
        self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Rational)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Rational {
        match self.entries.binary_search_by_key(&i, |e| e.0) {
            Ok(p) => self.entries[p].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn get_ref(&self, i: usize) -> Option<&Rational> {
        self.entries.binary_search_by_key(&i, |e| e.0).ok().map(|p| &self.entries[p].1)
    }

    /// Largest stored index plus one (0 when empty).
    pub fn support_bound(&self) -> usize {
        self.entries.last().map_or(0, |e| e.0 + 1)
    }

    pub fn to_dense(&self, n: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); n];
        for (i, x) in &self.entries {
            v[*i] = x.clone();
        }
        v
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        Self { entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { entries: self.entries.iter().map(|(i, v)| (*i, -v)).collect() }
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, c: &Rational, other: &Self) -> Self {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y * c));
                        b.next();
                    } else {
                        let s = x + &(y * c);
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y * c));
                    b.next();
                }
                (None, None) => break,
            }
        }
        Self { entries: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(&Rational::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(&-Rational::one(), other)
    }

    pub fn dot(&self, other: &Self) -> Rational {
        let mut acc = Rational::zero();
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() && b < other.entries.len() {
            let (i, j) = (self.entries[a].0, other.entries[b].0);
            if i == j {
                acc += &self.entries[a].1 * &other.entries[b].1;
                a += 1;
                b += 1;
            } else if i < j {
                a += 1;
            } else {
                b += 1;
            }
        }
        acc
    }

    pub fn dot_dense(&self, v: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, x) in &self.entries {
            if !v[*i].is_zero() {
                acc += x * &v[*i];
            }
        }
        acc
    }

    /// Applies an index map (used to re-embed coordinates).
    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> Self {
        Self::from_entries(self.entries.iter().map(|(i, v)| (f(*i), v.clone())).collect())
    }
}

/// A dense scratch buffer that collects sparse sums and emits a [`SparseVec`].
pub struct Accumulator {
    vals: Vec<Rational>,
    mark: Vec<bool>,
    touched: Vec<usize>,
}

impl Accumulator {
    pub fn new(dim: usize) -> Self {
        Self { vals: vec![Rational::zero(); dim], mark: vec![false; dim], touched: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.vals.len()
    }

    pub fn add(&mut self, i: usize, c: &Rational) {
        if c.is_zero() {
            return;
        }
        if self.mark[i] {
            self.vals[i] += c;
        } else {
            self.mark[i] = true;
            self.touched.push(i);
            self.vals[i] = c.clone();
        }
    }

    pub fn add_vec(&mut self, v: &SparseVec) {
        for (i, x) in v.iter() {
            self.add(*i, x);
        }
    }

    pub fn add_scaled(&mut self, c: &Rational, v: &SparseVec) {
        if c.is_zero() {
            return;
        }
        if c.is_one() {
            return self.add_vec(v);
        }
        for (i, x) in v.iter() {
            self.add(*i, &(x * c));
        }
    }

    /// Emits the accumulated vector and resets the buffer.
    pub fn finish(&mut self) -> SparseVec {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            self.mark[i] = false;
            let v = std::mem::take(&mut self.vals[i]);
            if !v.is_zero() {
                out.push((i, v));
            }
        }
        self.touched.clear();
        SparseVec { entries: out }
    }
}

// ---------------------------------------------------------------------------
// Matrix

#[derive(Clone)]
enum Store {
    Dense(Vec<Rational>),
    Sparse(Vec<SparseVec>),
}

/// A rational matrix, dense below [`DENSE_LIMIT`] columns and row-sparse above.
#[derive(Clone)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    store: Store,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && (0..self.rows).all(|i| self.row(i) == other.row(i))
    }
}

impl Eq for Matrix {}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let store = if cols < DENSE_LIMIT {
            Store::Dense(vec![Rational::zero(); rows * cols])
        } else {
            Store::Sparse(vec![SparseVec::new(); rows])
        };
        Self { rows, cols, store }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn diag(d: &[Rational]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                if !v.is_zero() {
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    /// Builds from dense rows; panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Self::from_sparse_rows(c, rows.iter().map(|x| SparseVec::from_dense(x)).collect()).with_rows(r)
    }

    fn with_rows(self, r: usize) -> Self {
        debug_assert_eq!(self.rows, r);
        self
    }

    pub fn from_sparse_rows(cols: usize, rows: Vec<SparseVec>) -> Self {
        let r = rows.len();
        let mut m = Self::zeros(r, cols);
        match &mut m.store {
            Store::Sparse(s) => *s = rows,
            Store::Dense(d) => {
                for (i, row) in rows.iter().enumerate() {
                    for (j, v) in row.iter() {
                        d[i * cols + j] = v.clone();
                    }
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.store, Store::Dense(_))
    }

    /// Same matrix with dense storage regardless of the column count.
    pub fn to_dense(&self) -> Self {
        let mut d = vec![Rational::zero(); self.rows * self.cols];
        for i in 0..self.rows {
            for (j, v) in self.row(i).iter() {
                d[i * self.cols + j] = v.clone();
            }
        }
        Self { rows: self.rows, cols: self.cols, store: Store::Dense(d) }
    }

    /// Same matrix with row-sparse storage regardless of the column count.
    pub fn to_sparse(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, store: Store::Sparse((0..self.rows).map(|i| self.row(i)).collect()) }
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        assert!(i < self.rows && j < self.cols, "index out of range");
        match &self.store {
            Store::Dense(d) => d[i * self.cols + j].clone(),
            Store::Sparse(s) => s[i].get(j),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        match &mut self.store {
            Store::Dense(d) => d[i * self.cols + j] = v,
            Store::Sparse(s) => {
                let row = &mut s[i].entries;
                match row.binary_search_by_key(&j, |e| e.0) {
                    Ok(p) => {
                        if v.is_zero() {
                            row.remove(p);
                        } else {
                            row[p].1 = v;
                        }
                    }
                    Err(p) => {
                        if !v.is_zero() {
                            row.insert(p, (j, v));
                        }
                    }
                }
            }
        }
    }

    pub fn row(&self, i: usize) -> SparseVec {
        match &self.store {
            Store::Dense(d) => SparseVec::from_dense(&d[i * self.cols..(i + 1) * self.cols]),
            Store::Sparse(s) => s[i].clone(),
        }
    }

    pub fn column(&self, j: usize) -> SparseVec {
        SparseVec::from_sorted_unchecked(
            (0..self.rows).filter_map(|i| {
                let v = self.get(i, j);
                (!v.is_zero()).then_some((i, v))
            })
            .collect(),
        )
    }

    pub fn dense_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_dense(self.cols)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![Vec::new(); self.cols];
        for i in 0..self.rows {
            for (j, v) in self.row(i).iter() {
                rows[*j].push((i, v.clone()));
            }
        }
        Self::from_sparse_rows(self.rows, rows.into_iter().map(SparseVec::from_sorted_unchecked).collect())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let other_rows: Vec<SparseVec> = (0..other.rows).map(|i| other.row(i)).collect();
        let mut acc = Accumulator::new(other.cols);
        let rows = (0..self.rows)
            .map(|i| {
                for (k, a) in self.row(i).iter() {
                    acc.add_scaled(a, &other_rows[*k]);
                }
                acc.finish()
            })
            .collect();
        Ok(Self::from_sparse_rows(other.cols, rows))
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows).map(|i| self.row(i).dot_dense(v)).collect()
    }

    fn zip_rows(&self, other: &Matrix, c: &Rational) -> Result<Matrix, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::Dimension("shape mismatch".into()));
        }
        let rows = (0..self.rows).map(|i| self.row(i).add_scaled(c, &other.row(i))).collect();
        Ok(Self::from_sparse_rows(self.cols, rows))
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.zip_rows(other, &Rational::one())
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.zip_rows(other, &-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Self::from_sparse_rows(self.cols, (0..self.rows).map(|i| self.row(i).scale(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        (0..self.rows).all(|i| self.row(i).is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn trace(&self) -> Rational {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn is_alternating(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| self.get(i, i).is_zero()) && *self == self.transpose().scale(&-Rational::one())
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.cols);
        for i in 0..self.rows {
            e.insert(self.row(i));
        }
        e.rank()
    }

    /// A basis of the right null space `{v : M v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        kernel(self)
    }

    /// Exact inverse, or `Singular`.
    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        // Gauss–Jordan on [M | I] with sparse rows.
        let mut rows: Vec<SparseVec> = (0..n)
            .map(|i| {
                let mut e = self.row(i).into_entries();
                e.push((n + i, Rational::one()));
                SparseVec::from_sorted_unchecked(e)
            })
            .collect();
        for col in 0..n {
            let piv = (col..n)
                .filter(|&r| rows[r].get_ref(col).is_some())
                .min_by_key(|&r| rows[r].nnz())
                .ok_or(LinalgError::Singular)?;
            rows.swap(col, piv);
            let inv = rows[col].get(col).recip();
            rows[col] = rows[col].scale(&inv);
            let pivot_row = rows[col].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != col {
                    if let Some(f) = row.get_ref(col) {
                        let f = -f.clone();
                        *row = row.add_scaled(&f, &pivot_row);
                    }
                }
            }
        }
        let out = rows
            .into_iter()
            .map(|r| SparseVec::from_sorted_unchecked(r.into_entries().into_iter().filter(|e| e.0 >= n).map(|(j, v)| (j - n, v)).collect()))
            .collect();
        Ok(Self::from_sparse_rows(n, out))
    }

    /// Solves `M x = b` for square invertible `M`.
    pub fn solve(&self, b: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        Ok(self.inverse()?.mul_vec(b))
    }

    /// Bilinear evaluation `xᵀ M y`.
    pub fn bilinear(&self, x: &SparseVec, y: &SparseVec) -> Rational {
        let mut acc = Rational::zero();
        for (i, a) in x.iter() {
            let r = self.row(*i);
            let d = r.dot(y);
            if !d.is_zero() {
                acc += a * &d;
            }
        }
        acc
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let (r, c) = (self.rows + other.rows, self.cols + other.cols);
        let mut rows: Vec<SparseVec> = (0..self.rows).map(|i| self.row(i)).collect();
        rows.extend((0..other.rows).map(|i| other.row(i).map_indices(|j| j + self.cols)));
        let m = Self::from_sparse_rows(c, rows);
        debug_assert_eq!(m.rows, r);
        m
    }

    /// The principal submatrix on the given indices.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }
}

// ---------------------------------------------------------------------------
// Column-major sparse operators

/// A linear map stored by columns: `column(k)` is the image of `e_k`.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseOp {
    rows: usize,
    columns: Vec<SparseVec>,
}

impl fmt::Debug for SparseOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseOp {}x{} {:?}", self.rows, self.columns.len(), self.columns)
    }
}

impl SparseOp {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, columns: vec![SparseVec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self { rows: n, columns: (0..n).map(SparseVec::unit).collect() }
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        debug_assert!(columns.iter().all(|c| c.support_bound() <= rows));
        Self { rows, columns }
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        let t = m.transpose();
        Self { rows: m.rows(), columns: (0..m.cols()).map(|j| t.row(j)).collect() }
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_sparse_rows(self.rows, self.columns.clone()).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, k: usize) -> &SparseVec {
        &self.columns[k]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.columns[j].get(i)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.nnz()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_zero())
    }

    pub fn trace(&self) -> Rational {
        self.columns.iter().enumerate().map(|(k, c)| c.get(k)).sum()
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new(self.rows);
        self.apply_into(v, &mut acc);
        acc.finish()
    }

    /// Adds `self·v` to an accumulator.
    pub fn apply_into(&self, v: &SparseVec, acc: &mut Accumulator) {
        for (k, x) in v.iter() {
            acc.add_scaled(x, &self.columns[*k]);
        }
    }

    pub fn apply_dense(&self, v: &[Rational]) -> Vec<Rational> {
        self.apply(&SparseVec::from_dense(v)).to_dense(self.rows)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SparseOp) -> SparseOp {
        assert_eq!(self.cols(), other.rows, "composition shape");
        let mut acc = Accumulator::new(self.rows);
        let columns = other
            .columns
            .iter()
            .map(|c| {
                self.apply_into(c, &mut acc);
                acc.finish()
            })
            .collect();
        Self { rows: self.rows, columns }
    }

    /// `self∘other − other∘self`.
    pub fn commutator(&self, other: &SparseOp) -> SparseOp {
        self.compose(other).sub(&other.compose(self))
    }

    pub fn add_scaled(&self, c: &Rational, other: &SparseOp) -> SparseOp {
        assert_eq!((self.rows, self.cols()), (other.rows, other.cols()), "operator shape");
        Self {
            rows: self.rows,
            columns: self.columns.iter().zip(&other.columns).map(|(a, b)| a.add_scaled(c, b)).collect(),
        }
    }

    pub fn add(&self, other: &SparseOp) -> SparseOp {
        self.add_scaled(&Rational::one(), other)
    }

    pub fn sub(&self, other: &SparseOp) -> SparseOp {
        self.add_scaled(&-Rational::one(), other)
    }

    pub fn scale(&self, c: &Rational) -> SparseOp {
        Self { rows: self.rows, columns: self.columns.iter().map(|x| x.scale(c)).collect() }
    }

    pub fn transpose(&self) -> SparseOp {
        let mut cols = vec![Vec::new(); self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c.iter() {
                cols[*i].push((j, v.clone()));
            }
        }
        Self { rows: self.cols(), columns: cols.into_iter().map(SparseVec::from_sorted_unchecked).collect() }
    }

    /// `Σ cᵢ·opsᵢ` over equally shaped operators.
    pub fn linear_combination(ops: &[SparseOp], coeffs: &[Rational]) -> SparseOp {
        assert_eq!(ops.len(), coeffs.len());
        let (rows, cols) = (ops[0].rows, ops[0].cols());
        let mut acc = Accumulator::new(rows);
        let columns = (0..cols)
            .map(|k| {
                for (op, c) in ops.iter().zip(coeffs) {
                    acc.add_scaled(c, &op.columns[k]);
                }
                acc.finish()
            })
            .collect();
        Self { rows, columns }
    }

    /// Column-major flattening: entry `(i, j)` goes to index `j·rows + i`.
    pub fn flatten(&self) -> SparseVec {
        let mut e = Vec::with_capacity(self.nnz());
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c.iter() {
                e.push((j * self.rows + i, v.clone()));
            }
        }
        SparseVec::from_sorted_unchecked(e)
    }

    pub fn unflatten(rows: usize, cols: usize, v: &SparseVec) -> SparseOp {
        let mut columns = vec![Vec::new(); cols];
        for (idx, x) in v.iter() {
            columns[idx / rows].push((idx % rows, x.clone()));
        }
        Self { rows, columns: columns.into_iter().map(SparseVec::from_sorted_unchecked).collect() }
    }

    /// Trace of `self∘other` without forming the product.
    pub fn trace_product(&self, other: &SparseOp) -> Rational {
        // tr(AB) = Σ_{i,k} A[i][k]·B[k][i]
        let mut acc = Rational::zero();
        for (k, col) in self.columns.iter().enumerate() {
            for (i, a) in col.iter() {
                if let Some(b) = other.columns[*i].get_ref(k) {
                    acc += a * b;
                }
            }
        }
        acc
    }

    /// Restricts a map to the coordinate sub-block `rows × cols` (indices into self).
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> SparseOp {
        let mut pos = vec![usize::MAX; self.rows];
        for (a, &r) in rows.iter().enumerate() {
            pos[r] = a;
        }
        let columns = cols
            .iter()
            .map(|&c| {
                SparseVec::from_entries(
                    self.columns[c].iter().filter(|(i, _)| pos[*i] != usize::MAX).map(|(i, v)| (pos[*i], v.clone())).collect(),
                )
            })
            .collect();
        Self { rows: rows.len(), columns }
    }
}

// ---------------------------------------------------------------------------
// Row echelon forms

/// An incrementally built, fully reduced row echelon basis of a subspace.
///
/// Every stored row has a leading 1 at its pivot and zeros at every other
/// pivot, so coordinates of a member vector are read off at the pivots.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
    pivot_row: Vec<usize>,
}

const NONE: usize = usize::MAX;

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Self { dim, rows: Vec::new(), pivots: Vec::new(), pivot_row: vec![NONE; dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Rows in insertion order (their pivots are [`Echelon::pivots`]).
    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` modulo the current span.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new(self.dim);
        acc.add_vec(v);
        for (i, x) in v.iter() {
            let r = self.pivot_row[*i];
            if r != NONE {
                acc.add_scaled(&-x.clone(), &self.rows[r]);
            }
        }
        acc.finish()
    }

    /// Inserts `v`; returns `false` when it already lies in the span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let w = self.reduce(&v);
        if w.is_zero() {
            return false;
        }
        let (p, lead) = w.entries()[0].clone();
        let w = w.scale(&lead.recip());
        for row in self.rows.iter_mut() {
            if let Some(c) = row.get_ref(p) {
                let c = -c.clone();
                *row = row.add_scaled(&c, &w);
            }
        }
        self.pivot_row[p] = self.rows.len();
        self.pivots.push(p);
        self.rows.push(w);
        true
    }

    /// Coordinates of `v` in the current rows, or `None` if `v` is outside the span.
    pub fn coords(&self, v: &SparseVec) -> Option<Vec<Rational>> {
        let c: Vec<Rational> = self.pivots.iter().map(|&p| v.get(p)).collect();
        let mut acc = Accumulator::new(self.dim);
        acc.add_vec(v);
        for (row, x) in self.rows.iter().zip(&c) {
            acc.add_scaled(&-x.clone(), row);
        }
        acc.finish().is_zero().then_some(c)
    }

    /// Canonical reduced row echelon form: rows sorted by pivot.
    pub fn into_rref(self) -> (Vec<SparseVec>, Vec<usize>) {
        let mut pairs: Vec<(usize, SparseVec)> = self.pivots.into_iter().zip(self.rows).collect();
        pairs.sort_by_key(|p| p.0);
        let (pivots, rows) = pairs.into_iter().unzip();
        (rows, pivots)
    }
}

/// Reduced row echelon form of a matrix: nonzero rows and pivot columns.
pub fn rref(m: &Matrix) -> (Vec<SparseVec>, Vec<usize>) {
    let mut e = Echelon::new(m.cols());
    for i in 0..m.rows() {
        e.insert(m.row(i));
    }
    e.into_rref()
}

/// Null-space basis; vector `t` has a 1 at the `t`-th free column and 0 at the others.
pub fn kernel(m: &Matrix) -> Vec<Vec<Rational>> {
    kernel_sparse(m.cols(), (0..m.rows()).map(|i| m.row(i)))
        .into_iter()
        .map(|v| v.to_dense(m.cols()))
        .collect()
}

/// Null space of the matrix whose rows are given, as sparse vectors.
pub fn kernel_sparse(cols: usize, rows: impl IntoIterator<Item = SparseVec>) -> Vec<SparseVec> {
    let mut e = Echelon::new(cols);
    for r in rows {
        e.insert(r);
    }
    let (rows, pivots) = e.into_rref();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut e: Vec<(usize, Rational)> = vec![(f, Rational::one())];
            for (row, &p) in rows.iter().zip(&pivots) {
                if let Some(v) = row.get_ref(f) {
                    e.push((p, -v.clone()));
                }
            }
            SparseVec::from_entries(e)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Subspaces with coordinates

/// A subspace with a caller-chosen basis and exact coordinate extraction.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<SparseVec>,
    /// Position of each ambient index among the pivot columns (`NONE` if not a pivot).
    pivot_pos: Vec<usize>,
    /// `inv · v|_pivots` gives the coordinates of a member `v`.
    inv: SparseOp,
}

impl Subspace {
    /// Fails with `Dependent` if the vectors are not linearly independent.
    pub fn new(ambient: usize, basis: Vec<SparseVec>) -> Result<Self, LinalgError> {
        let mut e = Echelon::new(ambient);
        for b in &basis {
            if b.support_bound() > ambient {
                return Err(LinalgError::Dimension("basis vector outside ambient space".into()));
            }
            if !e.insert(b.clone()) {
                return Err(LinalgError::Dependent);
            }
        }
        let (_, pivots) = e.into_rref();
        let k = basis.len();
        let m = Matrix::from_fn(k, k, |r, a| basis[a].get(pivots[r]));
        let inv = SparseOp::from_matrix(&m.inverse()?);
        let mut pivot_pos = vec![NONE; ambient];
        for (r, &p) in pivots.iter().enumerate() {
            pivot_pos[p] = r;
        }
        Ok(Self { ambient, basis, pivot_pos, inv })
    }

    /// Sparse coordinates of `v`, or `None` when `v` is not in the subspace.
    pub fn coords_sparse(&self, v: &SparseVec) -> Option<SparseVec> {
        if v.support_bound() > self.ambient {
            return None;
        }
        let restricted = SparseVec::from_entries(
            v.iter().filter(|(i, _)| self.pivot_pos[*i] != NONE).map(|(i, x)| (self.pivot_pos[*i], x.clone())).collect(),
        );
        let c = self.inv.apply(&restricted);
        let mut acc = Accumulator::new(self.ambient);
        for (a, x) in c.iter() {
            acc.add_scaled(x, &self.basis[*a]);
        }
        (acc.finish() == *v).then_some(c)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    /// Coordinates of `v`, or `None` when `v` is not in the subspace.
    pub fn coords(&self, v: &SparseVec) -> Option<Vec<Rational>> {
        self.coords_sparse(v).map(|c| c.to_dense(self.dim()))
    }

    /// `Σ cₐ·bₐ`.
    pub fn vector(&self, c: &[Rational]) -> SparseVec {
        let mut acc = Accumulator::new(self.ambient);
        for (b, x) in self.basis.iter().zip(c) {
            acc.add_scaled(x, b);
        }
        acc.finish()
    }

    /// Matrix of an ambient operator restricted to the subspace, if it is invariant.
    pub fn restrict(&self, op: &SparseOp) -> Option<SparseOp> {
        let cols = self
            .basis
            .iter()
            .map(|b| self.coords_sparse(&op.apply(b)))
            .collect::<Option<Vec<_>>>()?;
        Some(SparseOp::from_columns(self.dim(), cols))
    }
}

// ---------------------------------------------------------------------------
// Bilinear forms and signatures

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Symmetric,
    Alternating,
}

/// A bilinear form given by its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearForm {
    gram: Matrix,
    symmetry: Symmetry,
}

impl BilinearForm {
    /// Checks that `gram` is square and has the declared symmetry.
    pub fn new(gram: Matrix, symmetry: Symmetry) -> Result<Self, LinalgError> {
        let ok = match symmetry {
            Symmetry::Symmetric => gram.is_symmetric(),
            Symmetry::Alternating => gram.is_alternating(),
        };
        if !ok {
            return Err(LinalgError::Symmetry(match symmetry {
                Symmetry::Symmetric => "symmetric",
                Symmetry::Alternating => "alternating",
            }));
        }
        Ok(Self { gram, symmetry })
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn eval(&self, x: &SparseVec, y: &SparseVec) -> Rational {
        self.gram.bilinear(x, y)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.gram.rank() == self.dim()
    }
}

/// Counts of positive, negative and zero entries of a diagonalized form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

/// Inertia of a symmetric matrix by congruence diagonalization.
///
/// Zero pivots facing a nonzero off-diagonal entry are split off as a
/// hyperbolic plane, contributing one positive and one negative square.
pub fn inertia(m: &Matrix) -> Inertia {
    assert!(m.is_square(), "inertia of a non-square matrix");
    let n = m.rows();
    let mut a: Vec<Vec<Rational>> = m.dense_rows();
    let mut active = vec![true; n];
    let (mut pos, mut neg, mut done) = (0, 0, 0);
    loop {
        let diag = (0..n).find(|&i| active[i] && !a[i][i].is_zero());
        if let Some(i) = diag {
            let d = a[i][i].clone();
            if d.signum() > 0 {
                pos += 1;
            } else {
                neg += 1;
            }
            active[i] = false;
            done += 1;
            let nz: Vec<usize> = (0..n).filter(|&k| active[k] && !a[i][k].is_zero()).collect();
            let fac: Vec<Rational> = nz.iter().map(|&j| &a[j][i] / &d).collect();
            for (x, &j) in nz.iter().enumerate() {
                for &k in &nz {
                    let t = &fac[x] * &a[i][k];
                    a[j][k] -= t;
                }
            }
            for &j in &nz {
                a[j][i] = Rational::zero();
                a[i][j] = Rational::zero();
            }
            continue;
        }
        let pair = (0..n).filter(|&i| active[i]).find_map(|i| {
            (0..n).find(|&j| j != i && active[j] && !a[i][j].is_zero()).map(|j| (i, j))
        });
        let Some((i, j)) = pair else { break };
        let h = a[i][j].clone();
        pos += 1;
        neg += 1;
        active[i] = false;
        active[j] = false;
        done += 2;
        let nz: Vec<usize> = (0..n).filter(|&k| active[k] && (!a[k][i].is_zero() || !a[k][j].is_zero())).collect();
        let ki: Vec<Rational> = nz.iter().map(|&k| a[k][i].clone()).collect();
        let kj: Vec<Rational> = nz.iter().map(|&k| a[k][j].clone()).collect();
        for x in 0..nz.len() {
            for y in 0..nz.len() {
                let t = (&kj[y] * &ki[x] + &ki[y] * &kj[x]) / &h;
                a[nz[x]][nz[y]] -= t;
            }
        }
        for &k in &nz {
            for c in [i, j] {
                a[k][c] = Rational::zero();
                a[c][k] = Rational::zero();
            }
        }
    }
    Inertia { positive: pos, negative: neg, zero: n - done }
}

/// `#positive − #negative` of a symmetric form.
pub fn signature(b: &BilinearForm) -> i64 {
    assert_eq!(b.symmetry(), Symmetry::Symmetric, "signature needs a symmetric form");
    inertia(b.gram()).signature()
}

// ---------------------------------------------------------------------------
// Invariant bilinear forms

/// Solution space of an invariant-form problem.
#[derive(Debug, Clone)]
pub struct InvariantForms {
    pub dim: usize,
    pub basis: Vec<Matrix>,
}

fn pair_index(n: usize, i: usize, j: usize, sym: Symmetry) -> usize {
    // Row-major enumeration of i<j (alternating) or i<=j (symmetric).
    match sym {
        Symmetry::Alternating => i * n - i * (i + 1) / 2 + (j - i - 1),
        Symmetry::Symmetric => i * n - i * (i + 1) / 2 + (j - i) + i,
    }
}

fn pair_count(n: usize, sym: Symmetry) -> usize {
    match sym {
        Symmetry::Alternating => n * (n - 1) / 2,
        Symmetry::Symmetric => n * (n + 1) / 2,
    }
}

fn pair_list(n: usize, sym: Symmetry) -> Vec<(usize, usize)> {
    let mut v = Vec::with_capacity(pair_count(n, sym));
    for i in 0..n {
        let start = if sym == Symmetry::Alternating { i + 1 } else { i };
        for j in start..n {
            v.push((i, j));
        }
    }
    v
}

/// Unknown index and sign for the Gram entry `B[i][j]`.
fn unknown(n: usize, i: usize, j: usize, sym: Symmetry) -> Option<(usize, bool)> {
    match sym {
        Symmetry::Alternating if i == j => None,
        Symmetry::Alternating if i < j => Some((pair_index(n, i, j, sym), false)),
        Symmetry::Alternating => Some((pair_index(n, j, i, sym), true)),
        Symmetry::Symmetric => Some((pair_index(n, i.min(j), i.max(j), sym), false)),
    }
}

/// The linear equations `(dᵀB + Bd)[k][l] = 0` for one operator `d`.
fn invariance_equations(d: &SparseOp, sym: Symmetry, mut emit: impl FnMut(Vec<(usize, Rational)>)) {
    let n = d.rows();
    for (k, l) in pair_list(n, sym) {
        let mut e = Vec::new();
        // Σ_m d[m][k]·B[m][l]
        for (m, v) in d.column(k).iter() {
            if let Some((u, flip)) = unknown(n, *m, l, sym) {
                e.push((u, if flip { -v.clone() } else { v.clone() }));
            }
        }
        // Σ_m B[k][m]·d[m][l]
        for (m, v) in d.column(l).iter() {
            if let Some((u, flip)) = unknown(n, k, *m, sym) {
                e.push((u, if flip { -v.clone() } else { v.clone() }));
            }
        }
        if !e.is_empty() {
            emit(e);
        }
    }
}

fn form_from_unknowns(n: usize, sym: Symmetry, x: &SparseVec) -> Matrix {
    let pairs = pair_list(n, sym);
    let mut m = Matrix::zeros(n, n);
    for (u, v) in x.iter() {
        let (i, j) = pairs[*u];
        m.set(i, j, v.clone());
        if i != j {
            m.set(j, i, if sym == Symmetry::Alternating { -v.clone() } else { v.clone() });
        }
    }
    m
}

fn is_invariant(b: &Matrix, rep: &[SparseOp]) -> bool {
    let bo = SparseOp::from_matrix(b);
    rep.iter().all(|d| d.transpose().compose(&bo).add(&bo.compose(d)).is_zero())
}

/// Modular arithmetic over the Mersenne prime 2⁶¹ − 1.
mod modp {
    use super::*;

    pub const P: u64 = (1 << 61) - 1;

    pub fn mul(a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % P as u128) as u64
    }

    pub fn add(a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= P {
            s - P
        } else {
            s
        }
    }

    pub fn neg(a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            P - a
        }
    }

    pub fn pow(mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(a: u64) -> u64 {
        pow(a, P - 2)
    }

    fn reduce_big(b: &BigInt) -> u64 {
        let m = b.mod_floor(&BigInt::from(P));
        m.to_u64().expect("residue fits")
    }

    /// Residue of a rational, or `None` when the denominator vanishes mod P.
    pub fn from_rational(r: &Rational) -> Option<u64> {
        let (n, d) = match r.as_small() {
            Some((n, d)) => ((n as i128).rem_euclid(P as i128) as u64, (d as u64) % P),
            None => (reduce_big(&r.numer()), reduce_big(&r.denom())),
        };
        (d != 0).then(|| mul(n, inv(d)))
    }

    /// Smallest-height rational congruent to `a`, when one of height ≤ √(P/2) exists.
    pub fn reconstruct(a: u64) -> Option<Rational> {
        let bound: i128 = 1 << 30;
        let (mut r0, mut r1) = (P as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 >= bound {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if t1 == 0 || t1.abs() >= bound {
            return None;
        }
        let (num, den) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
        if num.gcd(&den) != 1 {
            return None;
        }
        Some(Rational::new(num as i64, den as i64))
    }
}

/// Fully reduced echelon form over F_P with sparse rows.
struct ModEchelon {
    rows: Vec<Vec<(usize, u64)>>,
    pivot_row: Vec<usize>,
    scratch: Vec<u64>,
    mark: Vec<bool>,
}

impl ModEchelon {
    fn new(dim: usize) -> Self {
        Self { rows: Vec::new(), pivot_row: vec![NONE; dim], scratch: vec![0; dim], mark: vec![false; dim] }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, eq: &[(usize, u64)]) -> bool {
        let mut touched: Vec<usize> = Vec::new();
        let mut bump = |s: &mut Vec<u64>, mark: &mut Vec<bool>, i: usize, v: u64| {
            if !mark[i] {
                mark[i] = true;
                touched.push(i);
                s[i] = v;
            } else {
                s[i] = modp::add(s[i], v);
            }
        };
        for &(i, v) in eq {
            bump(&mut self.scratch, &mut self.mark, i, v);
        }
        for &(i, v) in eq {
            let r = self.pivot_row[i];
            if r != NONE && v != 0 {
                let c = modp::neg(v);
                for &(j, w) in &self.rows[r] {
                    bump(&mut self.scratch, &mut self.mark, j, modp::mul(c, w));
                }
            }
        }
        touched.sort_unstable();
        let mut w: Vec<(usize, u64)> = Vec::new();
        for &i in &touched {
            self.mark[i] = false;
            if self.scratch[i] != 0 {
                w.push((i, self.scratch[i]));
            }
            self.scratch[i] = 0;
        }
        if w.is_empty() {
            return false;
        }
        let (p, lead) = w[0];
        let li = modp::inv(lead);
        for e in w.iter_mut() {
            e.1 = modp::mul(e.1, li);
        }
        for row in self.rows.iter_mut() {
            if let Ok(pos) = row.binary_search_by_key(&p, |e| e.0) {
                let c = modp::neg(row[pos].1);
                *row = merge_mod(row, c, &w);
            }
        }
        self.pivot_row[p] = self.rows.len();
        self.rows.push(w);
        true
    }

    /// Null-space basis mod P in free-column normal form.
    fn kernel(&self, dim: usize) -> Vec<Vec<(usize, u64)>> {
        (0..dim)
            .filter(|&f| self.pivot_row[f] == NONE)
            .map(|f| {
                let mut v = vec![(f, 1u64)];
                for (p, &r) in self.pivot_row.iter().enumerate() {
                    if r != NONE {
                        if let Ok(pos) = self.rows[r].binary_search_by_key(&f, |e| e.0) {
                            v.push((p, modp::neg(self.rows[r][pos].1)));
                        }
                    }
                }
                v.sort_by_key(|e| e.0);
                v
            })
            .collect()
    }
}

/// Rank and independence testing of rational vectors modulo the prime 2⁶¹ − 1.
///
/// A set that is independent modulo the prime is independent over ℚ; the
/// converse can fail only for vectors whose reduction collapses, so callers
/// certify spanning claims exactly.
pub struct ModularEchelon(ModEchelon);

impl ModularEchelon {
    pub fn new(dim: usize) -> Self {
        Self(ModEchelon::new(dim))
    }

    pub fn rank(&self) -> usize {
        self.0.rank()
    }

    /// Inserts the reduction of `v`; returns whether the rank grew. Vectors with a
    /// denominator divisible by the prime are rejected (never happens for our data).
    pub fn insert_rational(&mut self, v: &SparseVec) -> bool {
        let m: Option<Vec<(usize, u64)>> = v.iter().map(|(i, x)| modp::from_rational(x).map(|r| (*i, r))).collect();
        match m {
            Some(m) => self.0.insert(&m),
            None => false,
        }
    }
}

fn merge_mod(a: &[(usize, u64)], c: u64, b: &[(usize, u64)]) -> Vec<(usize, u64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, modp::mul(c, b[j].1)));
            j += 1;
        } else {
            let s = modp::add(a[i].1, modp::mul(c, b[j].1));
            if s != 0 {
                out.push((a[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// All bilinear forms `B` of the given symmetry with `dᵀB + Bd = 0` for every `d` in `rep`.
pub fn invariant_bilinear_space(rep: &[Matrix], symmetry: Symmetry) -> Result<InvariantForms, LinalgError> {
    let ops: Vec<SparseOp> = rep.iter().map(SparseOp::from_matrix).collect();
    invariant_forms_with_hint(&ops, symmetry, &[])
}

/// Like [`invariant_bilinear_space`], taking operators and optional known solutions.
///
/// The rank of the invariance system is computed modulo a 61-bit prime, which
/// bounds the rational rank from below. Known exact solutions bound it from
/// above, so once the modular rank meets that bound the hints are provably a
/// basis and the remaining equations are skipped. Otherwise the modular kernel
/// is lifted by rational reconstruction and every lifted form is re-verified
/// exactly; if that fails the system is solved over ℚ directly.
pub fn invariant_forms_with_hint(
    rep: &[SparseOp],
    symmetry: Symmetry,
    hints: &[Matrix],
) -> Result<InvariantForms, LinalgError> {
    let n = match (rep.first(), hints.first()) {
        (Some(d), _) => d.rows(),
        (None, Some(h)) => h.rows(),
        (None, None) => return Err(LinalgError::Dimension("empty representation".into())),
    };
    if rep.iter().any(|d| d.rows() != n || d.cols() != n) {
        return Err(LinalgError::Dimension("representation matrices must be square of equal size".into()));
    }
    let unknowns = pair_count(n, symmetry);
    let to_vec = |b: &Matrix| -> SparseVec {
        SparseVec::from_entries(pair_list(n, symmetry).iter().enumerate().map(|(u, &(i, j))| (u, b.get(i, j))).collect())
    };

    // Known solutions: keep the independent, genuinely invariant ones.
    let mut hint_span = Echelon::new(unknowns);
    let mut good_hints = Vec::new();
    for h in hints {
        let ok_sym = match symmetry {
            Symmetry::Symmetric => h.is_symmetric(),
            Symmetry::Alternating => h.is_alternating(),
        };
        if ok_sym && is_invariant(h, rep) && hint_span.insert(to_vec(h)) {
            good_hints.push(h.clone());
        }
    }
    let target = unknowns - good_hints.len();

    let mut me = ModEchelon::new(unknowns);
    let mut modular_ok = true;
    'outer: for d in rep {
        let mut stop = false;
        invariance_equations(d, symmetry, |eq| {
            if stop || !modular_ok {
                return;
            }
            let mut m = Vec::with_capacity(eq.len());
            for (u, v) in SparseVec::from_entries(eq).iter() {
                match modp::from_rational(v) {
                    Some(r) => m.push((*u, r)),
                    None => {
                        modular_ok = false;
                        return;
                    }
                }
            }
            me.insert(&m);
            if me.rank() == target {
                stop = true;
            }
        });
        if stop || !modular_ok {
            break 'outer;
        }
    }
    if modular_ok && me.rank() == target {
        return Ok(InvariantForms { dim: good_hints.len(), basis: good_hints });
    }

    if modular_ok {
        let lifted: Option<Vec<Matrix>> = me
            .kernel(unknowns)
            .into_iter()
            .map(|v| {
                let e = v.into_iter().map(|(u, r)| modp::reconstruct(r).map(|x| (u, x))).collect::<Option<Vec<_>>>()?;
                Some(form_from_unknowns(n, symmetry, &SparseVec::from_entries(e)))
            })
            .collect();
        if let Some(basis) = lifted {
            if basis.iter().all(|b| is_invariant(b, rep)) {
                return Ok(InvariantForms { dim: basis.len(), basis });
            }
        }
    }

    // Exact fallback.
    let mut rows = Vec::new();
    for d in rep {
        invariance_equations(d, symmetry, |eq| rows.push(SparseVec::from_entries(eq)));
    }
    let basis: Vec<Matrix> = kernel_sparse(unknowns, rows).iter().map(|v| form_from_unknowns(n, symmetry, v)).collect();
    Ok(InvariantForms { dim: basis.len(), basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect())
    }

    #[test]
    fn signature_examples() {
        let id = BilinearForm::new(Matrix::identity(3), Symmetry::Symmetric).unwrap();
        assert_eq!(signature(&id), 3);
        let hyp = BilinearForm::new(m(&[&[0, 1], &[1, 0]]), Symmetry::Symmetric).unwrap();
        assert_eq!(signature(&hyp), 0);
        let sl2 = BilinearForm::new(m(&[&[8, 0, 0], &[0, 0, 4], &[0, 4, 0]]), Symmetry::Symmetric).unwrap();
        assert_eq!(signature(&sl2), 1);
    }

    #[test]
    fn inertia_counts_radical() {
        let i = inertia(&m(&[&[0, 0, 0], &[0, 2, 1], &[0, 1, 0]]));
        assert_eq!(i, Inertia { positive: 1, negative: 1, zero: 1 });
        let i = inertia(&m(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]));
        assert_eq!(i.signature(), -1);
        assert_eq!(i.zero, 0);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel(&Matrix::identity(2)).is_empty());
        assert_eq!(kernel(&Matrix::zeros(3, 3)).len(), 3);
        let k = kernel(&m(&[&[1, 2, 3]]));
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m(&[&[1, 2, 3]]).mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn dense_sparse_agree() {
        let a = Matrix::from_fn(5, 70, |i, j| if (i + j) % 7 == 0 { q(i as i64 + 1, j as i64 + 1) } else { qi(0) });
        assert!(!a.is_dense());
        let d = a.to_dense();
        assert!(d.is_dense());
        assert_eq!(a, d);
        assert_eq!(d.to_sparse(), a);
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(3));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse(), Err(LinalgError::Singular));
    }

    #[test]
    fn subspace_coordinates() {
        let b = vec![SparseVec::from_dense(&[qi(1), qi(1), qi(0)]), SparseVec::from_dense(&[qi(0), qi(1), qi(1)])];
        let s = Subspace::new(3, b).unwrap();
        let v = SparseVec::from_dense(&[qi(2), qi(5), qi(3)]);
        assert_eq!(s.coords(&v), Some(vec![qi(2), qi(3)]));
        assert_eq!(s.coords(&SparseVec::unit(0)), None);
    }

    #[test]
    fn invariant_forms_trivial_rep() {
        let r = invariant_bilinear_space(&[Matrix::zeros(2, 2)], Symmetry::Alternating).unwrap();
        assert_eq!(r.dim, 1);
        let r = invariant_bilinear_space(&[Matrix::zeros(2, 2)], Symmetry::Symmetric).unwrap();
        assert_eq!(r.dim, 3);
    }

    #[test]
    fn invariant_forms_sl2_natural() {
        // sl2 acting on its natural module: unique alternating, no symmetric form.
        let h = m(&[&[1, 0], &[0, -1]]);
        let e = m(&[&[0, 1], &[0, 0]]);
        let f = m(&[&[0, 0], &[1, 0]]);
        let alt = invariant_bilinear_space(&[h.clone(), e.clone(), f.clone()], Symmetry::Alternating).unwrap();
        assert_eq!(alt.dim, 1);
        let sym = invariant_bilinear_space(&[h, e, f], Symmetry::Symmetric).unwrap();
        assert_eq!(sym.dim, 0);
    }

    #[test]
    fn modular_reconstruction() {
        for r in [q(3, 7), q(-5, 2), qi(0), qi(-1), q(1, 1024)] {
            let a = modp::from_rational(&r).unwrap();
            assert_eq!(modp::reconstruct(a), Some(r));
        }
    }
}
