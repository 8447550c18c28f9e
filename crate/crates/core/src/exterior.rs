//! Sparse alternating forms on an `n`-dimensional space and the induced
//! action of `gl(n)` on them.
//!
//! A form of degree `l` is stored in canonical form: a map from strictly
//! increasing index tuples to nonzero rational coefficients, iterated in
//! lexicographic order.
//!
//! The dual action is fixed as `(A . xi)(x) = -xi(A x)`, i.e.
//! `A . e^i = -sum_k A_ik e^k`, extended to `l`-forms as a derivation. With
//! this convention a scalar matrix `c I` acts on a degree-`l` form as
//! multiplication by `-c l`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{collect_sparse, Matrix, Rational, SparseMatrix, SparseVec};

/// Strictly increasing tuple of 0-based covector indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<usize>);

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{:?}", self.0)
    }
}

impl MultiIndex {
    pub fn new(indices: Vec<usize>, dim: usize) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= dim) {
            return Err(Error::IndexOutOfRange { index: bad, dim });
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidForm(format!(
                "multi-index {indices:?} is not strictly increasing"
            )));
        }
        Ok(MultiIndex(indices))
    }

    /// Sorts `indices`, returning the sign of the sorting permutation, or
    /// `None` if an index repeats (the wedge monomial vanishes).
    pub fn sorted(mut indices: Vec<usize>) -> Option<(bool, MultiIndex)> {
        let mut negative = false;
        // insertion sort, counting transpositions
        for i in 1..indices.len() {
            let mut j = i;
            while j > 0 && indices[j - 1] > indices[j] {
                indices.swap(j - 1, j);
                negative = !negative;
                j -= 1;
            }
        }
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((negative, MultiIndex(indices)))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// Replaces the index in `slot` by `k` and re-sorts. Returns the sign of
    /// the reordering, or `None` when `k` already occupies another slot.
    pub fn replace(&self, slot: usize, k: usize) -> Option<(bool, MultiIndex)> {
        let old = self.0[slot];
        if k == old {
            return Some((false, self.clone()));
        }
        if self.contains(k) {
            return None;
        }
        let mut rest = self.0.clone();
        rest.remove(slot);
        let pos = rest.partition_point(|&x| x < k);
        rest.insert(pos, k);
        Some((slot.abs_diff(pos) % 2 == 1, MultiIndex(rest)))
    }

    pub fn intersection_len(&self, other: &MultiIndex) -> usize {
        self.0.iter().filter(|i| other.contains(**i)).count()
    }
}

/// All degree-`l` monomials on an `n`-dimensional space, lexicographically
/// ordered, with reverse lookup.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    dim: usize,
    degree: usize,
    monomials: Vec<MultiIndex>,
    position: HashMap<MultiIndex, usize>,
}

impl MonomialBasis {
    pub fn new(dim: usize, degree: usize) -> Self {
        Self::filtered(dim, degree, |_| true)
    }

    /// Only the monomials accepted by `keep`, still in lexicographic order.
    pub fn filtered(dim: usize, degree: usize, mut keep: impl FnMut(&[usize]) -> bool) -> Self {
        let mut monomials = Vec::new();
        if degree <= dim {
            let mut cur: Vec<usize> = (0..degree).collect();
            loop {
                if keep(&cur) {
                    monomials.push(MultiIndex(cur.clone()));
                }
                // advance to the next combination
                let mut i = degree;
                loop {
                    if i == 0 {
                        let position = index_of(&monomials);
                        return MonomialBasis {
                            dim,
                            degree,
                            monomials,
                            position,
                        };
                    }
                    i -= 1;
                    if cur[i] < dim - degree + i {
                        cur[i] += 1;
                        for j in i + 1..degree {
                            cur[j] = cur[j - 1] + 1;
                        }
                        break;
                    }
                }
            }
        }
        MonomialBasis {
            dim,
            degree,
            monomials,
            position: HashMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[MultiIndex] {
        &self.monomials
    }

    pub fn position(&self, idx: &MultiIndex) -> Option<usize> {
        self.position.get(idx).copied()
    }

    /// Coordinates of `w` in this basis; `None` if `w` has support outside it.
    pub fn coordinates(&self, w: &AlternatingForm) -> Option<SparseVec> {
        let mut out: SparseVec = w
            .terms
            .iter()
            .map(|(idx, c)| self.position(idx).map(|p| (p, c.clone())))
            .collect::<Option<_>>()?;
        out.sort_by_key(|(p, _)| *p);
        Some(out)
    }

    pub fn form(&self, coords: &[(usize, Rational)]) -> AlternatingForm {
        AlternatingForm {
            dim: self.dim,
            degree: self.degree,
            terms: coords
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(p, c)| (self.monomials[*p].clone(), c.clone()))
                .collect(),
        }
    }
}

fn index_of(monomials: &[MultiIndex]) -> HashMap<MultiIndex, usize> {
    monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect()
}

/// `C(n, k)` as a saturating `u128`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Element of `Λ^l V*` in canonical sparse form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(
    try_from = "crate::json::AlternatingFormJson",
    into = "crate::json::AlternatingFormJson"
)]
pub struct AlternatingForm {
    dim: usize,
    degree: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl AlternatingForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        AlternatingForm {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(dim: usize, c: Rational) -> Self {
        let mut w = Self::zero(dim, 0);
        w.add_term(MultiIndex(Vec::new()), c);
        w
    }

    /// `e^{i_1} ∧ ... ∧ e^{i_l}` for indices in any order (sign applied;
    /// repeated indices give the zero form).
    pub fn monomial(dim: usize, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= dim) {
            return Err(Error::IndexOutOfRange { index: bad, dim });
        }
        let mut w = Self::zero(dim, indices.len());
        if let Some((negative, idx)) = MultiIndex::sorted(indices.to_vec()) {
            w.add_term(idx, if negative { -Rational::one() } else { Rational::one() });
        }
        Ok(w)
    }

    pub fn covector(dim: usize, i: usize) -> Result<Self> {
        Self::monomial(dim, &[i])
    }

    /// Validated constructor; repeated keys are summed.
    pub fn from_terms(
        dim: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, Rational)>,
    ) -> Result<Self> {
        let mut w = Self::zero(dim, degree);
        for (indices, c) in terms {
            if indices.len() != degree {
                return Err(Error::InvalidForm(format!(
                    "term {indices:?} does not have degree {degree}"
                )));
            }
            w.add_term(MultiIndex::new(indices, dim)?, c);
        }
        Ok(w)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of nonzero terms.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, idx: &MultiIndex) -> Rational {
        self.terms.get(idx).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of `e^{indices}` (indices in any order).
    pub fn coefficient_of(&self, indices: &[usize]) -> Rational {
        match MultiIndex::sorted(indices.to_vec()) {
            Some((negative, idx)) => {
                let c = self.coefficient(&idx);
                if negative {
                    -c
                } else {
                    c
                }
            }
            None => Rational::zero(),
        }
    }

    fn add_term(&mut self, idx: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim, self.degree);
        }
        AlternatingForm {
            dim: self.dim,
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Rational, other: &AlternatingForm) -> Result<Self> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (idx, v) in &other.terms {
            out.add_term(idx.clone(), c * v);
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &AlternatingForm) -> Result<Self> {
        self.add_scaled(&Rational::one(), other)
    }

    pub fn try_sub(&self, other: &AlternatingForm) -> Result<Self> {
        self.add_scaled(&-Rational::one(), other)
    }

    /// `w(v_1, ..., v_l) = sum_I c_I det(v_k[I_j])`.
    pub fn evaluate(&self, vectors: &[Vec<Rational>]) -> Result<Rational> {
        if vectors.len() != self.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                found: vectors.len(),
            });
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != self.dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        let mut acc = Rational::zero();
        for (idx, c) in &self.terms {
            let minor = Matrix::from_fn(self.degree, self.degree, |r, s| {
                vectors[r][idx.0[s]].clone()
            });
            acc += c * minor.determinant();
        }
        Ok(acc)
    }

    fn check_same_space(&self, other: &AlternatingForm) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.degree != other.degree {
            return Err(Error::InvalidForm(format!(
                "degree mismatch: {} vs {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }
}

/// Exterior product with the shuffle sign rule.
pub fn wedge(a: &AlternatingForm, b: &AlternatingForm) -> Result<AlternatingForm> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            found: b.dim,
        });
    }
    let mut out = AlternatingForm::zero(a.dim, a.degree + b.degree);
    if a.degree + b.degree > a.dim {
        return Ok(out);
    }
    for (ia, ca) in &a.terms {
        for (ib, cb) in &b.terms {
            if ia.0.iter().any(|i| ib.contains(*i)) {
                continue;
            }
            // sign = parity of pairs (x in a, y in b) with x > y
            let inversions: usize = ia.0.iter().map(|x| ib.0.partition_point(|y| y < x)).sum();
            let mut merged = ia.0.clone();
            merged.extend_from_slice(&ib.0);
            merged.sort_unstable();
            let c = ca * cb;
            out.add_term(MultiIndex(merged), if inversions % 2 == 1 { -c } else { c });
        }
    }
    Ok(out)
}

/// Induced action of `A ∈ gl(n)` on an `l`-form:
/// `A(w) = sum_I c_I sum_j e^{i_1} ∧ ... ∧ A.e^{i_j} ∧ ... ∧ e^{i_l}`.
pub fn gl_action(a: &Matrix, w: &AlternatingForm) -> Result<AlternatingForm> {
    check_operator(a, w.dim)?;
    let n = w.dim;
    let mut out = AlternatingForm::zero(n, w.degree);
    for (idx, c) in &w.terms {
        for (slot, &i) in idx.0.iter().enumerate() {
            for (k, a_ik) in a.row(i).iter().enumerate() {
                if a_ik.is_zero() {
                    continue;
                }
                if let Some((negative, target)) = idx.replace(slot, k) {
                    let v = c * a_ik;
                    // A.e^i = -sum_k A_ik e^k
                    out.add_term(target, if negative { v } else { -v });
                }
            }
        }
    }
    Ok(out)
}

/// Linearization of `A ↦ A(w)`.
///
/// Rows follow [`MonomialBasis::new(n, l)`]; column `i * n + k` is the
/// entry `A_ik` (row-major flattening, as [`Matrix::flatten`]). For every
/// `A`, `coords(gl_action(A, w)) = M · flatten(A)`.
pub fn action_as_matrix_in_a(w: &AlternatingForm) -> SparseMatrix {
    let n = w.dim;
    let basis = MonomialBasis::new(n, w.degree);
    let mut rows: BTreeMap<usize, Vec<(usize, Rational)>> = BTreeMap::new();
    for (idx, c) in &w.terms {
        for (slot, &i) in idx.0.iter().enumerate() {
            for k in 0..n {
                if let Some((negative, target)) = idx.replace(slot, k) {
                    let row = basis.position(&target).expect("monomial in basis");
                    let v = if negative { c.clone() } else { -c.clone() };
                    rows.entry(row).or_default().push((i * n + k, v));
                }
            }
        }
    }
    let mut data = vec![Vec::new(); basis.len()];
    for (r, entries) in rows {
        data[r] = collect_sparse(entries);
    }
    SparseMatrix::from_rows(n * n, data).expect("columns in range")
}

/// Two wedge monomials are equivalent iff they share all but at most one
/// index, i.e. `a = x ∧ γ` and `b = y ∧ γ` for a common `(l-1)`-monomial `γ`.
pub fn monomial_equivalent(a: &MultiIndex, b: &MultiIndex) -> bool {
    a.degree() == b.degree() && a.intersection_len(b) + 1 >= a.degree()
}

/// A traceless `A` with `A(w) != 0`, or `None` when no such matrix exists
/// (degree `0` or degree equal to the dimension, where `sl` preserves `w`).
///
/// Candidates are single-entry matrices `E_ij` (`i != j`) moving an index
/// `i` of a support monomial to an index `j` outside it, scanned in
/// lexicographic order of `(monomial, i, j)`.
pub fn sl_witness(w: &AlternatingForm) -> Result<Option<Matrix>> {
    if w.is_zero() {
        return Err(Error::ZeroForm);
    }
    let n = w.dim;
    if w.degree == 0 || w.degree >= n {
        return Ok(None);
    }
    for idx in w.terms.keys() {
        for &i in &idx.0 {
            for j in (0..n).filter(|j| !idx.contains(*j)) {
                let a = Matrix::unit(n, i, j);
                if !gl_action(&a, w)?.is_zero() {
                    return Ok(Some(a));
                }
            }
        }
    }
    Ok(None)
}

fn check_operator(a: &Matrix, n: usize) -> Result<()> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.rows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.rows(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};

    fn mono(n: usize, idx: &[usize]) -> AlternatingForm {
        AlternatingForm::monomial(n, idx).unwrap()
    }

    #[test]
    fn wedge_sign_rules() {
        let e1 = mono(4, &[0]);
        let e2 = mono(4, &[1]);
        assert!(wedge(&e1, &e1).unwrap().is_zero());
        assert_eq!(wedge(&e1, &e2).unwrap(), wedge(&e2, &e1).unwrap().scale(&int(-1)));

        let lhs = wedge(&mono(4, &[0, 1]), &mono(4, &[2, 3])).unwrap();
        assert_eq!(lhs, mono(4, &[0, 1, 2, 3]));
        assert_eq!(lhs.coefficient_of(&[0, 1, 2, 3]), int(1));

        let shuffled = wedge(&mono(4, &[1, 3]), &mono(4, &[0, 2])).unwrap();
        // (e2 e4)(e1 e3): moving e1 past two, e3 past one -> sign -1
        assert_eq!(shuffled.coefficient_of(&[0, 1, 2, 3]), int(-1));
    }

    #[test]
    fn wedge_overflowing_degree_is_zero() {
        let w = wedge(&mono(2, &[0, 1]), &mono(2, &[0])).unwrap();
        assert!(w.is_zero());
        assert_eq!(w.degree(), 3);
    }

    #[test]
    fn identity_acts_by_minus_degree() {
        let w = AlternatingForm::from_terms(
            4,
            2,
            [(vec![0, 1], rat(3, 2)), (vec![1, 3], int(-5))],
        )
        .unwrap();
        assert_eq!(gl_action(&Matrix::identity(4), &w).unwrap(), w.scale(&int(-2)));
        assert!(gl_action(&Matrix::zeros(4, 4), &w).unwrap().is_zero());
    }

    #[test]
    fn single_entry_action() {
        // E_13 on e^1 ∧ e^2 (1-based) maps e^1 -> -e^3.
        let w = mono(3, &[0, 1]);
        let out = gl_action(&Matrix::unit(3, 0, 2), &w).unwrap();
        assert_eq!(out, mono(3, &[1, 2]));
    }

    #[test]
    fn degree_zero_is_inert() {
        let s = AlternatingForm::scalar(3, int(7));
        assert!(gl_action(&Matrix::identity(3), &s).unwrap().is_zero());
        assert_eq!(sl_witness(&s).unwrap(), None);
    }

    #[test]
    fn equivalence_examples() {
        let m = |v: &[usize]| MultiIndex::new(v.to_vec(), 6).unwrap();
        assert!(monomial_equivalent(&m(&[0, 1, 2]), &m(&[0, 1, 3])));
        assert!(monomial_equivalent(&m(&[0, 1, 2]), &m(&[0, 1, 2])));
        assert!(!monomial_equivalent(&m(&[0, 1, 2]), &m(&[0, 3, 4])));
    }

    /// Brute force: `b` appears in `A(a)` for some `A` iff it appears for
    /// some single-entry `A`, since the action is linear in `A`.
    #[test]
    fn equivalence_matches_single_entry_images() {
        let n = 5;
        for l in 1..=3 {
            let basis = MonomialBasis::new(n, l);
            for a in basis.monomials() {
                let wa = AlternatingForm::from_terms(n, l, [(a.indices().to_vec(), int(1))]).unwrap();
                let mut reachable = std::collections::BTreeSet::new();
                for i in 0..n {
                    for k in 0..n {
                        let img = gl_action(&Matrix::unit(n, i, k), &wa).unwrap();
                        reachable.extend(img.terms().map(|(idx, _)| idx.clone()));
                    }
                }
                for b in basis.monomials() {
                    assert_eq!(monomial_equivalent(a, b), reachable.contains(b), "{a:?} {b:?}");
                }
            }
        }
    }

    #[test]
    fn witness_examples() {
        let vol = mono(3, &[0, 1, 2]);
        assert_eq!(sl_witness(&vol).unwrap(), None);

        let w = mono(3, &[0, 1]);
        let a = sl_witness(&w).unwrap().unwrap();
        assert_eq!(a, Matrix::unit(3, 0, 2));
        assert!(a.trace().is_zero());
        let img = gl_action(&a, &w).unwrap();
        assert!(!img.coefficient_of(&[1, 2]).is_zero() || !img.coefficient_of(&[0, 2]).is_zero());

        assert_eq!(sl_witness(&AlternatingForm::zero(3, 2)), Err(Error::ZeroForm));
    }

    #[test]
    fn witness_scan_order_is_lexicographic() {
        // Support {0,2} comes first; slot 0, first free index 1.
        let w = AlternatingForm::from_terms(4, 2, [(vec![0, 2], int(1)), (vec![1, 3], int(4))]).unwrap();
        let a = sl_witness(&w).unwrap().unwrap();
        assert_eq!(a, Matrix::unit(4, 0, 1));
        assert!(!gl_action(&a, &w).unwrap().is_zero());
    }

    #[test]
    fn action_matrix_of_zero_form_is_zero() {
        let m = action_as_matrix_in_a(&AlternatingForm::zero(3, 2));
        assert!(m.is_zero());
        assert_eq!(m.rows(), 3);
        assert_eq!(m.cols(), 9);
    }

    #[test]
    fn action_matrix_on_identity() {
        let w = AlternatingForm::from_terms(3, 2, [(vec![0, 1], int(2)), (vec![1, 2], int(-1))]).unwrap();
        let m = action_as_matrix_in_a(&w);
        let basis = MonomialBasis::new(3, 2);
        let image = m.mul_vec(&Matrix::identity(3).flatten()).unwrap();
        let expected = crate::linalg::to_dense(&basis.coordinates(&w.scale(&int(-2))).unwrap(), 3);
        assert_eq!(image, expected);
    }

    #[test]
    fn monomial_basis_order_and_size() {
        let b = MonomialBasis::new(5, 3);
        assert_eq!(b.len(), 10);
        assert!(b.monomials().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(MonomialBasis::new(3, 0).len(), 1);
        assert_eq!(MonomialBasis::new(3, 4).len(), 0);
        assert_eq!(binomial(14, 7), 3432);
    }

    #[test]
    fn evaluate_is_alternating() {
        let w = mono(3, &[0, 1]);
        let x = vec![int(1), int(2), int(0)];
        let y = vec![int(3), int(-1), int(5)];
        let a = w.evaluate(&[x.clone(), y.clone()]).unwrap();
        let b = w.evaluate(&[y, x]).unwrap();
        assert_eq!(a, -b.clone());
        assert_eq!(a, int(-7));
    }

    #[test]
    fn from_terms_validates() {
        assert!(AlternatingForm::from_terms(3, 2, [(vec![1, 0], int(1))]).is_err());
        assert!(AlternatingForm::from_terms(3, 2, [(vec![0, 3], int(1))]).is_err());
        assert!(AlternatingForm::from_terms(3, 2, [(vec![0], int(1))]).is_err());
        let w = AlternatingForm::from_terms(3, 1, [(vec![0], int(1)), (vec![0], int(-1))]).unwrap();
        assert!(w.is_zero());
    }
}
