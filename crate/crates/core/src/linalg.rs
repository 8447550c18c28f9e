//! Exact linear algebra over the rationals.
//!
//! Everything here is tolerance free: kernels, ranks and subspace
//! comparisons are computed with unbounded-integer rationals. Subspaces are
//! kept in reduced row-echelon form so that equality of subspaces is plain
//! data equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Canonical rational number (reduced, positive denominator).
pub type Rational = BigRational;

/// Sparse vector: `(index, value)` pairs sorted by index, no stored zeros.
pub type SparseVec = Vec<(usize, Rational)>;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `a + coef * b` on sorted sparse vectors.
pub fn axpy(a: &[(usize, Rational)], coef: &Rational, b: &[(usize, Rational)]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, coef * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + coef * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sparse_get(v: &[(usize, Rational)], index: usize) -> Option<&Rational> {
    v.binary_search_by_key(&index, |(i, _)| *i)
        .ok()
        .map(|pos| &v[pos].1)
}

pub fn to_sparse(dense: &[Rational]) -> SparseVec {
    dense
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn to_dense(sparse: &[(usize, Rational)], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in sparse {
        out[*i] = x.clone();
    }
    out
}

/// Collects `(index, value)` contributions into a canonical sparse vector.
pub fn collect_sparse(entries: impl IntoIterator<Item = (usize, Rational)>) -> SparseVec {
    let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
    for (i, x) in entries {
        *acc.entry(i).or_insert_with(Rational::zero) += x;
    }
    acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn scalar(n: usize, c: Rational) -> Self {
        Self::identity(n).scale(&c)
    }

    /// Single nonzero entry `1` at `(i, j)`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.data[i * n + j] = Rational::one();
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch {
                    expected: ncols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    /// Convenience for tests and tables: integer entries.
    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Inverse of [`Matrix::flatten`] for square matrices.
    pub fn from_flat(n: usize, flat: &[Rational]) -> Result<Self> {
        if flat.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: flat.len(),
            });
        }
        Ok(Matrix {
            rows: n,
            cols: n,
            data: flat.to_vec(),
        })
    }

    pub fn from_sparse_flat(n: usize, flat: &[(usize, Rational)]) -> Self {
        let mut m = Self::zeros(n, n);
        for (i, x) in flat {
            m.data[*i] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Row-major flattening; entry `(i, j)` lands at `i * cols + j`.
    pub fn flatten(&self) -> Vec<Rational> {
        self.data.clone()
    }

    pub fn flatten_sparse(&self) -> SparseVec {
        to_sparse(&self.data)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Matrix) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.data[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Matrix) -> Result<Self> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// Determinant by rational Gaussian elimination.
    pub fn determinant(&self) -> Rational {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Rational::zero();
            };
            if piv != col {
                for c in 0..n {
                    a.swap(piv * n + c, col * n + c);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det *= &p;
            for r in col + 1..n {
                let f = &a[r * n + col] / &p;
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let sub = &f * &a[col * n + c];
                    a[r * n + c] -= sub;
                }
            }
        }
        det
    }

    pub fn sparse_rows(&self) -> Vec<SparseVec> {
        (0..self.rows).map(|r| to_sparse(self.row(r))).collect()
    }

    pub fn kernel(&self) -> Subspace {
        kernel(self)
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }
}

// Operator sugar for same-shape square matrices; panics on shape mismatch
// like the std numeric operators do on overflow.
impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.try_add(rhs).expect("matrix shape mismatch")
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.try_sub(rhs).expect("matrix shape mismatch")
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).expect("matrix shape mismatch")
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(&-Rational::one())
    }
}

/// Row-sparse rational matrix. Used for the large, mostly-empty linear
/// systems produced by the exterior-power actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn from_rows(cols: usize, data: Vec<SparseVec>) -> Result<Self> {
        for row in &data {
            if let Some((i, _)) = row.last() {
                if *i >= cols {
                    return Err(Error::IndexOutOfRange { index: *i, dim: cols });
                }
            }
        }
        Ok(SparseMatrix {
            rows: data.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[(usize, Rational)] {
        &self.data[r]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(self
            .data
            .iter()
            .map(|row| {
                row.iter()
                    .fold(Rational::zero(), |acc, (c, x)| acc + x * &v[*c])
            })
            .collect())
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for (r, row) in self.data.iter().enumerate() {
            for (c, x) in row {
                m.set(r, *c, x.clone());
            }
        }
        m
    }

    pub fn kernel(&self) -> Subspace {
        kernel_of_rows(self.cols, self.data.iter().cloned())
    }

    pub fn rank(&self) -> usize {
        let mut ech = RowEchelon::new(self.cols);
        for row in &self.data {
            ech.insert(row.clone());
        }
        ech.rank()
    }
}

/// Incremental fully reduced row-echelon form.
///
/// Every stored row has leading entry `1`, and no stored row has a nonzero
/// entry in another row's pivot column. Inserting rows one at a time keeps
/// only the independent part of the system, so constraint batches can be
/// streamed in without materializing the whole matrix.
#[derive(Clone, Debug, Default)]
pub struct RowEchelon {
    cols: usize,
    rows: BTreeMap<usize, SparseVec>,
}

impl RowEchelon {
    pub fn new(cols: usize) -> Self {
        RowEchelon {
            cols,
            rows: BTreeMap::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Rows in ascending pivot order.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }

    /// Remainder of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &[(usize, Rational)]) -> SparseVec {
        let mut out: SparseVec = v.to_vec();
        // Pivot rows only touch non-pivot columns besides their own pivot,
        // so the coefficients of `v` at pivot columns are final.
        for (col, coef) in v {
            if let Some(row) = self.rows.get(col) {
                out = axpy(&out, &-coef, row);
            }
        }
        out
    }

    /// Inserts `v`; returns `true` if it was independent of the rows so far.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut w = self.reduce(&v);
        let Some((lead_col, lead)) = w.first().cloned() else {
            return false;
        };
        if !lead.is_one() {
            let inv = lead.recip();
            for (_, x) in w.iter_mut() {
                *x *= &inv;
            }
        }
        for row in self.rows.values_mut() {
            if let Some(c) = sparse_get(row, lead_col).cloned() {
                *row = axpy(row, &-c, &w);
            }
        }
        self.rows.insert(lead_col, w);
        true
    }

    pub fn contains(&self, v: &[(usize, Rational)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Basis of `{x : row . x = 0 for every stored row}`.
    pub fn kernel(&self) -> Subspace {
        let mut free_entries: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for c in 0..self.cols {
            if !self.rows.contains_key(&c) {
                free_entries.insert(c, vec![(c, Rational::one())]);
            }
        }
        for (pivot, row) in &self.rows {
            for (c, x) in row.iter().skip(1) {
                if let Some(v) = free_entries.get_mut(c) {
                    v.push((*pivot, -x.clone()));
                }
            }
        }
        let vectors = free_entries.into_values().map(|mut v| {
            v.sort_by_key(|(i, _)| *i);
            v
        });
        Subspace::from_sparse(self.cols, vectors)
    }

    pub fn into_subspace(self) -> Subspace {
        Subspace {
            ambient_dim: self.cols,
            basis: self.rows.into_values().collect(),
        }
    }
}

/// A linear subspace of `Q^ambient_dim`, stored as its unique reduced
/// row-echelon basis (pivot columns ascending).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "crate::json::SubspaceJson", into = "crate::json::SubspaceJson")]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<SparseVec>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: (0..ambient_dim).map(|i| vec![(i, Rational::one())]).collect(),
        }
    }

    pub fn from_sparse(
        ambient_dim: usize,
        vectors: impl IntoIterator<Item = SparseVec>,
    ) -> Self {
        let mut ech = RowEchelon::new(ambient_dim);
        for v in vectors {
            ech.insert(v);
        }
        ech.into_subspace()
    }

    pub fn from_dense<'a>(
        ambient_dim: usize,
        vectors: impl IntoIterator<Item = &'a [Rational]>,
    ) -> Result<Self> {
        let mut ech = RowEchelon::new(ambient_dim);
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
            ech.insert(to_sparse(v));
        }
        Ok(ech.into_subspace())
    }

    /// Span of square matrices, flattened row-major.
    pub fn from_matrices<'a>(n: usize, mats: impl IntoIterator<Item = &'a Matrix>) -> Result<Self> {
        let mut ech = RowEchelon::new(n * n);
        for m in mats {
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: m.rows().max(m.cols()),
                });
            }
            ech.insert(m.flatten_sparse());
        }
        Ok(ech.into_subspace())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn basis_dense(&self) -> Vec<Vec<Rational>> {
        self.basis
            .iter()
            .map(|v| to_dense(v, self.ambient_dim))
            .collect()
    }

    /// Basis vectors reshaped into `n x n` matrices (ambient must be `n^2`).
    pub fn basis_matrices(&self) -> Result<Vec<Matrix>> {
        let n = num_integer::Roots::sqrt(&self.ambient_dim);
        if n * n != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: self.ambient_dim,
            });
        }
        Ok(self
            .basis
            .iter()
            .map(|v| Matrix::from_sparse_flat(n, v))
            .collect())
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|v| v[0].0).collect()
    }

    fn echelon(&self) -> RowEchelon {
        RowEchelon {
            cols: self.ambient_dim,
            rows: self.basis.iter().map(|v| (v[0].0, v.clone())).collect(),
        }
    }

    pub fn contains(&self, v: &[(usize, Rational)]) -> bool {
        self.echelon().contains(v)
    }

    pub fn contains_dense(&self, v: &[Rational]) -> bool {
        v.len() == self.ambient_dim && self.contains(&to_sparse(v))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        if other.ambient_dim != self.ambient_dim {
            return false;
        }
        let ech = self.echelon();
        other.basis.iter().all(|v| ech.contains(v))
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[(usize, Rational)]) -> Option<Vec<Rational>> {
        if !self.contains(v) {
            return None;
        }
        Some(
            self.pivots()
                .into_iter()
                .map(|p| sparse_get(v, p).cloned().unwrap_or_else(Rational::zero))
                .collect(),
        )
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let mut ech = self.echelon();
        for v in &other.basis {
            ech.insert(v.clone());
        }
        Ok(ech.into_subspace())
    }

    /// `{x : b . x = 0 for all b in self}` under the standard pairing.
    pub fn annihilator(&self) -> Subspace {
        self.echelon().kernel()
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        intersect(self, other)
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }
}

/// Exact nullspace `{x : m x = 0}`.
pub fn kernel(m: &Matrix) -> Subspace {
    kernel_of_rows(m.cols(), m.sparse_rows())
}

/// Nullspace of the system whose rows are streamed in.
pub fn kernel_of_rows(cols: usize, rows: impl IntoIterator<Item = SparseVec>) -> Subspace {
    let mut ech = RowEchelon::new(cols);
    for row in rows {
        ech.insert(row);
        if ech.rank() == cols {
            break;
        }
    }
    ech.kernel()
}

pub fn rank(m: &Matrix) -> usize {
    let mut ech = RowEchelon::new(m.cols());
    for row in m.sparse_rows() {
        ech.insert(row);
    }
    ech.rank()
}

/// `a ∩ b`, computed as the common kernel of both annihilators.
pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.check_ambient(b)?;
    if a.contains_subspace(b) {
        return Ok(b.clone());
    }
    if b.contains_subspace(a) {
        return Ok(a.clone());
    }
    let rows = a
        .annihilator()
        .basis
        .into_iter()
        .chain(b.annihilator().basis);
    Ok(kernel_of_rows(a.ambient_dim, rows))
}

/// Smallest subspace of `n x n` matrices containing `gens` and closed under
/// matrix multiplication.
///
/// Breadth first by word length: every new basis element is multiplied on
/// the left by each generator, and products are kept only when they enlarge
/// the span.
pub fn associative_closure(gens: &[Matrix]) -> Result<Subspace> {
    let Some(first) = gens.first() else {
        return Ok(Subspace::zero(0));
    };
    if !first.is_square() {
        return Err(Error::NotSquare {
            rows: first.rows(),
            cols: first.cols(),
        });
    }
    let n = first.rows();
    for g in gens {
        if g.rows() != n || g.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.rows().max(g.cols()),
            });
        }
    }
    let mut ech = RowEchelon::new(n * n);
    let mut frontier: Vec<Matrix> = Vec::new();
    for g in gens {
        if ech.insert(g.flatten_sparse()) {
            frontier.push(g.clone());
        }
    }
    while !frontier.is_empty() && ech.rank() < n * n {
        let mut next = Vec::new();
        for word in &frontier {
            for g in gens {
                let prod = g * word;
                if ech.insert(prod.flatten_sparse()) {
                    next.push(prod);
                }
            }
        }
        frontier = next;
    }
    Ok(ech.into_subspace())
}

/// Solves for coordinates with respect to an arbitrary independent family.
///
/// Built by reducing the augmented rows `[b_i | e_i]`: each echelon row then
/// records which combination of the family produced it.
#[derive(Clone, Debug)]
pub struct BasisSolver {
    len: usize,
    family: usize,
    pivots: Vec<usize>,
    echelon_part: Vec<SparseVec>,
    transforms: Vec<SparseVec>,
}

impl BasisSolver {
    pub fn new(len: usize, family: &[SparseVec]) -> Result<Self> {
        let mut ech = RowEchelon::new(len + family.len());
        for (i, v) in family.iter().enumerate() {
            let mut row = v.clone();
            row.push((len + i, Rational::one()));
            ech.insert(row);
        }
        let mut pivots = Vec::new();
        let mut echelon_part = Vec::new();
        let mut transforms = Vec::new();
        for (p, row) in ech.rows {
            if p >= len {
                return Err(Error::LinearlyDependent);
            }
            let split = row.partition_point(|(i, _)| *i < len);
            pivots.push(p);
            echelon_part.push(row[..split].to_vec());
            transforms.push(row[split..].iter().map(|(i, x)| (i - len, x.clone())).collect());
        }
        Ok(BasisSolver {
            len,
            family: family.len(),
            pivots,
            echelon_part,
            transforms,
        })
    }

    pub fn from_matrices(mats: &[Matrix]) -> Result<Self> {
        let len = mats.first().map_or(0, |m| m.rows() * m.cols());
        let family: Vec<SparseVec> = mats.iter().map(Matrix::flatten_sparse).collect();
        Self::new(len, &family)
    }

    pub fn family_len(&self) -> usize {
        self.family
    }

    /// Sparse coefficients `c` with `v = sum c_i b_i`, or `None` if `v` is
    /// outside the span.
    pub fn solve(&self, v: &[(usize, Rational)]) -> Option<SparseVec> {
        let mut residual: SparseVec = v.to_vec();
        let mut coeffs: SparseVec = Vec::new();
        for ((p, row), t) in self.pivots.iter().zip(&self.echelon_part).zip(&self.transforms) {
            if let Some(c) = sparse_get(v, *p) {
                residual = axpy(&residual, &-c, row);
                coeffs = axpy(&coeffs, c, t);
            }
        }
        residual.is_empty().then_some(coeffs)
    }

    pub fn solve_dense(&self, v: &[(usize, Rational)]) -> Option<Vec<Rational>> {
        self.solve(v).map(|c| to_dense(&c, self.family))
    }

    pub fn ambient_len(&self) -> usize {
        self.len
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn kernel_identity_is_zero() {
        let k = kernel(&Matrix::identity(3));
        assert_eq!(k.dim(), 0);
        assert_eq!(k.ambient_dim(), 3);
    }

    #[test]
    fn kernel_of_zero_map_is_everything() {
        let k = kernel(&Matrix::zeros(2, 5));
        assert_eq!(k, Subspace::full(5));
    }

    #[test]
    fn kernel_rank_one() {
        let m = Matrix::from_i64(&[&[1, 2], &[2, 4]]).unwrap();
        let k = kernel(&m);
        assert_eq!(k.dim(), 1);
        assert!(k.contains_dense(&dense(&[-2, 1])));
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn empty_matrix_kernel() {
        let k = kernel_of_rows(4, std::iter::empty());
        assert_eq!(k.dim(), 4);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Matrix::identity(4)), 4);
        assert_eq!(rank(&Matrix::zeros(3, 3)), 0);
    }

    #[test]
    fn intersect_examples() {
        let xy = Subspace::from_dense(3, [dense(&[1, 0, 0]).as_slice(), &dense(&[0, 1, 0])]).unwrap();
        let yz = Subspace::from_dense(3, [dense(&[0, 1, 0]).as_slice(), &dense(&[0, 0, 1])]).unwrap();
        let y = Subspace::from_dense(3, [dense(&[0, 1, 0]).as_slice()]).unwrap();
        assert_eq!(intersect(&xy, &yz).unwrap(), y);
        assert_eq!(intersect(&xy, &xy).unwrap(), xy);

        let a = Subspace::from_dense(2, [dense(&[1, 1]).as_slice()]).unwrap();
        let b = Subspace::from_dense(2, [dense(&[1, -1]).as_slice()]).unwrap();
        assert!(intersect(&a, &b).unwrap().is_zero());
    }

    #[test]
    fn intersect_rejects_mismatch() {
        assert!(matches!(
            intersect(&Subspace::full(2), &Subspace::full(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn echelon_form_is_canonical() {
        let a = Subspace::from_dense(3, [dense(&[1, 2, 3]).as_slice(), &dense(&[0, 1, 1])]).unwrap();
        let b = Subspace::from_dense(3, [dense(&[1, 3, 4]).as_slice(), &dense(&[2, 5, 7])]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.pivots(), vec![0, 1]);
    }

    #[test]
    fn closure_of_identity() {
        let c = associative_closure(&[Matrix::identity(3)]).unwrap();
        assert_eq!(c.dim(), 1);
    }

    #[test]
    fn closure_of_diagonal_generator() {
        let d = Matrix::from_i64(&[&[1, 0], &[0, -1]]).unwrap();
        let c = associative_closure(std::slice::from_ref(&d)).unwrap();
        assert_eq!(c.dim(), 2);
        assert!(c.contains(&Matrix::identity(2).flatten_sparse()));
        assert!(c.contains(&d.flatten_sparse()));
    }

    #[test]
    fn closure_rejects_mixed_sizes() {
        let err = associative_closure(&[Matrix::identity(2), Matrix::identity(3)]);
        assert!(err.is_err());
    }

    #[test]
    fn basis_solver_coordinates() {
        let fam = vec![to_sparse(&dense(&[1, 1, 0])), to_sparse(&dense(&[0, 1, 1]))];
        let s = BasisSolver::new(3, &fam).unwrap();
        let c = s.solve_dense(&to_sparse(&dense(&[2, 5, 3]))).unwrap();
        assert_eq!(c, dense(&[2, 3]));
        assert!(s.solve(&to_sparse(&dense(&[1, 0, 0]))).is_none());

        let dep = vec![fam[0].clone(), fam[0].clone()];
        assert_eq!(BasisSolver::new(3, &dep).unwrap_err(), Error::LinearlyDependent);
    }

    #[test]
    fn matrix_basics() {
        let a = Matrix::from_i64(&[&[1, 2], &[3, 4]]).unwrap();
        let b = Matrix::from_i64(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(a.trace(), int(5));
        assert_eq!((&a * &b), Matrix::from_i64(&[&[2, 1], &[4, 3]]).unwrap());
        assert_eq!(a.commutator(&a).unwrap(), Matrix::zeros(2, 2));
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(Matrix::from_flat(2, &a.flatten()).unwrap(), a);
    }
}
