//! Split simple Lie algebras with exact structure constants.
//!
//! Every algebra is built from a matrix realization: a basis of matrices in
//! the defining representation, with structure constants read off by
//! expressing each commutator in that basis. Basis order is fixed per
//! series: Cartan elements first, then positive root vectors, then the
//! matching negative root vectors in the same order.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    associative_closure, axpy, collect_sparse, int, kernel_of_rows, sparse_get, to_dense,
    to_sparse, BasisSolver, Matrix, Rational, SparseVec, Subspace,
};

/// Elements of `gl(g)` are plain square matrices in the algebra's basis.
pub type Endomorphism = Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Series {
    A,
    B,
    C,
    D,
    G,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::G => 'G',
        };
        write!(f, "{c}")
    }
}

impl FromStr for Series {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Series::A),
            "B" => Ok(Series::B),
            "C" => Ok(Series::C),
            "D" => Ok(Series::D),
            "G" => Ok(Series::G),
            other => Err(Error::Unsupported(format!("series {other:?}"))),
        }
    }
}

/// A supported `(series, rank)` pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    series: Series,
    rank: usize,
}

impl CartanType {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B => rank >= 2,
            Series::C => rank >= 3,
            Series::D => rank >= 4,
            Series::G => rank == 2,
        };
        if ok {
            Ok(CartanType { series, rank })
        } else {
            Err(Error::Unsupported(format!("{series}{rank}")))
        }
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        let r = self.rank;
        match self.series {
            Series::A => r * (r + 2),
            Series::B | Series::C => r * (2 * r + 1),
            Series::D => r * (2 * r - 1),
            Series::G => 14,
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let series: Series = chars
            .next()
            .ok_or_else(|| Error::Unsupported(String::new()))?
            .to_string()
            .parse()?;
        let rank = chars
            .as_str()
            .trim_start_matches('_')
            .parse()
            .map_err(|_| Error::Unsupported(s.to_string()))?;
        CartanType::new(series, rank)
    }
}

/// Finite-dimensional Lie algebra given by structure constants
/// `[e_i, e_j] = sum_k c_ij^k e_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(
    try_from = "crate::json::LieAlgebraJson",
    into = "crate::json::LieAlgebraJson"
)]
pub struct LieAlgebra {
    name: String,
    labels: Vec<String>,
    /// `brackets[i * dim + j]` holds `[e_i, e_j]`.
    brackets: Vec<SparseVec>,
}

impl LieAlgebra {
    /// Builds the split form of the given type.
    pub fn build(series: Series, rank: usize) -> Result<Self> {
        Self::split(CartanType::new(series, rank)?)
    }

    pub fn split(ty: CartanType) -> Result<Self> {
        let (labels, mats) = match ty.series {
            Series::A => special_linear(ty.rank + 1),
            Series::B => orthogonal(2 * ty.rank + 1),
            Series::C => symplectic(ty.rank),
            Series::D => orthogonal(2 * ty.rank),
            Series::G => exceptional_g2(),
        };
        let alg = Self::from_matrices(ty.to_string(), labels, &mats)?;
        debug_assert_eq!(alg.dim(), ty.dim());
        Ok(alg)
    }

    /// Structure constants of the span of `mats`, which must be linearly
    /// independent and closed under the commutator.
    pub fn from_matrices(name: String, labels: Vec<String>, mats: &[Matrix]) -> Result<Self> {
        let n = mats.len();
        if labels.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: labels.len(),
            });
        }
        let solver = BasisSolver::from_matrices(mats)?;
        let mut triples = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let br = mats[i].commutator(&mats[j])?;
                let coeffs = solver
                    .solve(&br.flatten_sparse())
                    .ok_or(Error::NotClosed(i, j))?;
                triples.extend(coeffs.into_iter().map(|(k, c)| (i, j, k, c)));
            }
        }
        Self::from_structure_constants(name, labels, triples)
    }

    /// From sparse triples `(i, j, k, c)` with `i < j`; the `j > i` half is
    /// filled in by antisymmetry. The Jacobi identity is checked.
    pub fn from_structure_constants(
        name: String,
        labels: Vec<String>,
        triples: impl IntoIterator<Item = (usize, usize, usize, Rational)>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut raw: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n * n];
        for (i, j, k, c) in triples {
            for idx in [i, j, k] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, dim: n });
                }
            }
            if i >= j {
                return Err(Error::InvalidAlgebra(format!(
                    "structure constant ({i},{j},{k}) must have i < j"
                )));
            }
            raw[i * n + j].push((k, c.clone()));
            raw[j * n + i].push((k, -c));
        }
        let brackets = raw.into_iter().map(collect_sparse).collect();
        let alg = LieAlgebra {
            name,
            labels,
            brackets,
        };
        if let Some((i, j, k)) = alg.jacobi_violation() {
            return Err(Error::InvalidAlgebra(format!(
                "Jacobi identity fails on ({}, {}, {})",
                alg.labels[i], alg.labels[j], alg.labels[k]
            )));
        }
        Ok(alg)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `[e_i, e_j]` as a sparse coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.brackets[i * self.dim() + j]
    }

    /// Nonzero structure constants with `i < j`, in lexicographic order.
    pub fn structure_constants(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> + '_ {
        let n = self.dim();
        (0..n).flat_map(move |i| {
            (i + 1..n).flat_map(move |j| {
                self.bracket_basis(i, j)
                    .iter()
                    .map(move |(k, c)| (i, j, *k, c))
            })
        })
    }

    fn bracket_sparse(&self, x: &[(usize, Rational)], y: &[(usize, Rational)]) -> SparseVec {
        let mut out = Vec::new();
        for (i, a) in x {
            for (j, b) in y {
                let br = self.bracket_basis(*i, *j);
                if !br.is_empty() {
                    out = axpy(&out, &(a * b), br);
                }
            }
        }
        out
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
        self.check_vec(x)?;
        self.check_vec(y)?;
        Ok(to_dense(
            &self.bracket_sparse(&to_sparse(x), &to_sparse(y)),
            self.dim(),
        ))
    }

    /// First basis triple on which the Jacobi identity fails, if any.
    pub fn jacobi_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        let unit = |i: usize| vec![(i, Rational::one())];
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let a = self.bracket_sparse(self.bracket_basis(i, j), &unit(k));
                    let b = self.bracket_sparse(self.bracket_basis(j, k), &unit(i));
                    let c = self.bracket_sparse(self.bracket_basis(k, i), &unit(j));
                    let sum = axpy(&axpy(&a, &Rational::one(), &b), &Rational::one(), &c);
                    if !sum.is_empty() {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// `true` when `c_ij^k = -c_ji^k` and `[e_i, e_i] = 0` everywhere.
    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            self.bracket_basis(i, i).is_empty()
                && (i + 1..n).all(|j| {
                    let neg: SparseVec = self
                        .bracket_basis(j, i)
                        .iter()
                        .map(|(k, c)| (*k, -c.clone()))
                        .collect();
                    &neg == self.bracket_basis(i, j)
                })
        })
    }

    /// `ad(e_i)`: column `m` holds the coordinates of `[e_i, e_m]`.
    pub fn ad_basis(&self, i: usize) -> Endomorphism {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for col in 0..n {
            for (row, c) in self.bracket_basis(i, col) {
                m.set(*row, col, c.clone());
            }
        }
        m
    }

    pub fn ad(&self, x: &[Rational]) -> Result<Endomorphism> {
        self.check_vec(x)?;
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                out = &out + &self.ad_basis(i).scale(c);
            }
        }
        Ok(out)
    }

    pub fn ad_matrices(&self) -> Vec<Endomorphism> {
        (0..self.dim()).map(|i| self.ad_basis(i)).collect()
    }

    /// `ad(g)` inside the `n^2`-dimensional matrix space.
    ///
    /// Fails if `ad` is not injective, which cannot happen for a simple
    /// algebra.
    pub fn ad_subalgebra(&self) -> Result<Subspace> {
        let n = self.dim();
        let ads = self.ad_matrices();
        let span = Subspace::from_matrices(n, &ads)?;
        if span.dim() != n {
            return Err(Error::InvalidAlgebra(format!(
                "ad is not injective: dim ad(g) = {} < {n}",
                span.dim()
            )));
        }
        Ok(span)
    }

    /// `B(x, y) = trace(ad x ad y)`.
    pub fn killing_form(&self) -> BilinearForm {
        let n = self.dim();
        // ad(e_i)[k][m] = c_im^k
        let entries: Vec<Vec<(usize, usize, &Rational)>> = (0..n)
            .map(|i| {
                (0..n)
                    .flat_map(|m| self.bracket_basis(i, m).iter().map(move |(k, c)| (*k, m, c)))
                    .collect()
            })
            .collect();
        let mut out = Matrix::zeros(n, n);
        for (i, row) in entries.iter().enumerate() {
            for j in i..n {
                let mut acc = Rational::zero();
                for (k, m, c) in row {
                    // ad(e_j)[m][k] = c_jk^m
                    if let Some(d) = sparse_get(self.bracket_basis(j, *k), *m) {
                        acc += *c * d;
                    }
                }
                out.set(i, j, acc.clone());
                out.set(j, i, acc);
            }
        }
        BilinearForm { matrix: out }
    }

    fn check_vec(&self, x: &[Rational]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(())
    }
}

/// Bilinear form `B(e_i, e_j)` stored as its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    pub matrix: Matrix,
}

impl BilinearForm {
    pub fn eval(&self, x: &[Rational], y: &[Rational]) -> Result<Rational> {
        let by = self.matrix.mul_vec(y)?;
        if x.len() != by.len() {
            return Err(Error::DimensionMismatch {
                expected: by.len(),
                found: x.len(),
            });
        }
        Ok(x.iter().zip(&by).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
    }

    pub fn is_symmetric(&self) -> bool {
        self.matrix == self.matrix.transpose()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.rank() == self.matrix.rows()
    }
}

/// Elements of `span(basis)` commuting with every basis element.
pub fn center_of_subalgebra(basis: &[Endomorphism]) -> Result<Subspace> {
    let n = square_size(basis)?;
    let d = basis.len();
    let mut rows: std::collections::BTreeMap<(usize, usize), Vec<(usize, Rational)>> =
        Default::default();
    for (k, bk) in basis.iter().enumerate() {
        for (j, bj) in basis.iter().enumerate() {
            for (e, x) in bk.commutator(bj)?.flatten_sparse() {
                rows.entry((j, e)).or_default().push((k, x));
            }
        }
    }
    let coeffs = kernel_of_rows(d, rows.into_values().map(collect_sparse));
    let elements = coeffs.basis().iter().map(|t| {
        t.iter().fold(Matrix::zeros(n, n), |acc, (k, c)| &acc + &basis[*k].scale(c))
    });
    let elements: Vec<Matrix> = elements.collect();
    Subspace::from_matrices(n, &elements)
}

/// Outcome of Cartan's criterion on a matrix Lie algebra.
#[derive(Clone, Debug)]
pub struct SemisimplicityCheck {
    pub semisimple: bool,
    /// Abstract structure constants of the subalgebra in the given basis.
    pub structure: LieAlgebra,
    pub killing_rank: usize,
}

/// Cartan's criterion: the span of `basis` is semisimple iff its own
/// Killing form is nondegenerate. `basis` must be linearly independent and
/// closed under the commutator.
pub fn is_semisimple(basis: &[Endomorphism]) -> Result<SemisimplicityCheck> {
    square_size(basis)?;
    let solver = BasisSolver::from_matrices(basis)?;
    let d = basis.len();
    let mut triples = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let br = basis[i].commutator(&basis[j])?;
            let coeffs = solver
                .solve(&br.flatten_sparse())
                .ok_or(Error::NotClosed(i, j))?;
            triples.extend(coeffs.into_iter().map(|(k, c)| (i, j, k, c)));
        }
    }
    let labels = (0..d).map(|i| format!("b{i}")).collect();
    let structure = LieAlgebra::from_structure_constants("subalgebra".into(), labels, triples)?;
    let killing_rank = structure.killing_form().rank();
    Ok(SemisimplicityCheck {
        semisimple: killing_rank == d,
        structure,
        killing_rank,
    })
}

/// Burnside test: the generators (with the identity adjoined) act
/// irreducibly iff their associative closure is all of `gl(n)`.
pub fn is_irreducible(gens: &[Endomorphism]) -> Result<bool> {
    let n = square_size(gens)?;
    let mut all = gens.to_vec();
    all.push(Matrix::identity(n));
    Ok(associative_closure(&all)?.dim() == n * n)
}

fn square_size(mats: &[Matrix]) -> Result<usize> {
    let first = mats.first().ok_or(Error::DimensionMismatch {
        expected: 1,
        found: 0,
    })?;
    if !first.is_square() {
        return Err(Error::NotSquare {
            rows: first.rows(),
            cols: first.cols(),
        });
    }
    let n = first.rows();
    if let Some(bad) = mats.iter().find(|m| m.rows() != n || m.cols() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.rows().max(bad.cols()),
        });
    }
    Ok(n)
}

// ---------------------------------------------------------------------------
// Matrix realizations

type Realization = (Vec<String>, Vec<Matrix>);

fn elementary(m: usize, entries: &[(usize, usize, i64)]) -> Matrix {
    let mut out = Matrix::zeros(m, m);
    for &(r, c, v) in entries {
        let cur = out.get(r, c).clone();
        out.set(r, c, cur + int(v));
    }
    out
}

/// `sl(m)`: `H_i = E_ii - E_(i+1)(i+1)`, then `E_ij` (`i < j`, lexicographic),
/// then `E_ji` in the same order. `sl(2)` uses the labels `H, X, Y`.
fn special_linear(m: usize) -> Realization {
    let mut labels = Vec::new();
    let mut mats = Vec::new();
    for i in 0..m - 1 {
        labels.push(format!("H{}", i + 1));
        mats.push(elementary(m, &[(i, i, 1), (i + 1, i + 1, -1)]));
    }
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect();
    for &(i, j) in &pairs {
        labels.push(format!("E{}_{}", i + 1, j + 1));
        mats.push(elementary(m, &[(i, j, 1)]));
    }
    for &(i, j) in &pairs {
        labels.push(format!("F{}_{}", i + 1, j + 1));
        mats.push(elementary(m, &[(j, i, 1)]));
    }
    if m == 2 {
        labels = vec!["H".into(), "X".into(), "Y".into()];
    }
    (labels, mats)
}

/// `so(m)` preserving the antidiagonal form, so the diagonal part is a
/// split Cartan subalgebra. Root vectors are `E_ij - E_(m-1-j)(m-1-i)` for
/// positions strictly above the antidiagonal.
fn orthogonal(m: usize) -> Realization {
    let r = m / 2;
    let mirror = |k: usize| m - 1 - k;
    let mut labels = Vec::new();
    let mut mats = Vec::new();
    for i in 0..r {
        labels.push(format!("H{}", i + 1));
        mats.push(elementary(m, &[(i, i, 1), (mirror(i), mirror(i), -1)]));
    }
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .filter(|&(i, j)| i + j < m - 1)
        .collect();
    for &(i, j) in &pairs {
        labels.push(format!("E{}_{}", i + 1, j + 1));
        mats.push(elementary(m, &[(i, j, 1), (mirror(j), mirror(i), -1)]));
    }
    for &(i, j) in &pairs {
        labels.push(format!("F{}_{}", i + 1, j + 1));
        mats.push(elementary(m, &[(j, i, 1), (mirror(i), mirror(j), -1)]));
    }
    (labels, mats)
}

/// `sp(2r)` preserving `[[0, I], [-I, 0]]`: matrices `[[A, B], [C, -A^T]]`
/// with `B`, `C` symmetric.
fn symplectic(r: usize) -> Realization {
    let m = 2 * r;
    let mut labels = Vec::new();
    let mut mats = Vec::new();
    for i in 0..r {
        labels.push(format!("H{}", i + 1));
        mats.push(elementary(m, &[(i, i, 1), (r + i, r + i, -1)]));
    }
    let a_pairs: Vec<(usize, usize)> = (0..r)
        .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
        .collect();
    let b_pairs: Vec<(usize, usize)> = (0..r).flat_map(|i| (i..r).map(move |j| (i, j))).collect();
    let a_pos = |i: usize, j: usize| elementary(m, &[(i, j, 1), (r + j, r + i, -1)]);
    let b_pos = |i: usize, j: usize| {
        if i == j {
            elementary(m, &[(i, r + i, 1)])
        } else {
            elementary(m, &[(i, r + j, 1), (j, r + i, 1)])
        }
    };
    for &(i, j) in &a_pairs {
        labels.push(format!("E{}_{}", i + 1, j + 1));
        mats.push(a_pos(i, j));
    }
    for &(i, j) in &b_pairs {
        labels.push(format!("E{}_{}'", i + 1, j + 1));
        mats.push(b_pos(i, j));
    }
    for &(i, j) in &a_pairs {
        labels.push(format!("F{}_{}", i + 1, j + 1));
        mats.push(a_pos(i, j).transpose());
    }
    for &(i, j) in &b_pairs {
        labels.push(format!("F{}_{}'", i + 1, j + 1));
        mats.push(b_pos(i, j).transpose());
    }
    (labels, mats)
}

/// `G_2` in its 7-dimensional representation, generated from Chevalley
/// generators. Weight order of the representation space:
/// `2a+b, a+b, a, 0, -a, -a-b, -2a-b` (`a` short, `b` long).
///
/// Root vectors: `X1 = e_a`, `X2 = e_b`, `X3 = [X1, X2]`, `X4 = [X1, X3]`,
/// `X5 = [X1, X4]`, `X6 = [X2, X5]`, and `Y*` built the same way from the
/// lowering generators.
fn exceptional_g2() -> Realization {
    let e1 = elementary(7, &[(0, 1, 1), (2, 3, 2), (3, 4, 1), (5, 6, 1)]);
    let f1 = elementary(7, &[(1, 0, 1), (3, 2, 1), (4, 3, 2), (6, 5, 1)]);
    let e2 = elementary(7, &[(1, 2, 1), (4, 5, 1)]);
    let f2 = elementary(7, &[(2, 1, 1), (5, 4, 1)]);
    let br = |a: &Matrix, b: &Matrix| a.commutator(b).expect("7x7");

    let chain = |g1: &Matrix, g2: &Matrix| -> Vec<Matrix> {
        let x3 = br(g1, g2);
        let x4 = br(g1, &x3);
        let x5 = br(g1, &x4);
        let x6 = br(g2, &x5);
        vec![g1.clone(), g2.clone(), x3, x4, x5, x6]
    };

    let mut mats = vec![br(&e1, &f1), br(&e2, &f2)];
    mats.extend(chain(&e1, &e2));
    mats.extend(chain(&f1, &f2));
    let mut labels = vec!["H1".to_string(), "H2".to_string()];
    labels.extend((1..=6).map(|i| format!("X{i}")));
    labels.extend((1..=6).map(|i| format!("Y{i}")));
    (labels, mats)
}
