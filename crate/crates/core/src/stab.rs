//! Adjoint-invariant forms, their stabilizer algebras inside `gl(g)`, and
//! the verification reports built from them.

use std::collections::BTreeMap;

use log::{debug, info};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{action_as_matrix_in_a, gl_action, AlternatingForm, MonomialBasis};
use crate::liealg::{center_of_subalgebra, is_semisimple, LieAlgebra};
use crate::linalg::{collect_sparse, int, intersect, kernel_of_rows, rat, Matrix, Rational, Subspace};

/// Seed for the random invariant combinations when none is given.
pub const DEFAULT_SEED: u64 = 0x5EED;

/// Number of seeded random combinations of the invariant basis checked by
/// [`verify_stabilizers`] in addition to the basis forms themselves.
pub const RANDOM_COMBINATIONS: usize = 3;

/// Basis of the adjoint-invariant degree-`l` forms, in reduced echelon
/// order over the lexicographic monomial basis (leading coefficient `1`).
pub fn invariant_forms(g: &LieAlgebra, degree: usize) -> Result<Vec<AlternatingForm>> {
    let n = g.dim();
    if degree > n {
        return Err(Error::DegreeOutOfRange {
            degree,
            dim: n,
            min: 0,
            max: n,
        });
    }
    let ads = g.ad_matrices();
    let (diagonal, other): (Vec<&Matrix>, Vec<&Matrix>) = ads.iter().partition(|a| is_diagonal(a));

    // A diagonal operator scales e^I by -(sum of its diagonal over I), so an
    // invariant form only involves monomials of total weight zero.
    let weights: Vec<Vec<Rational>> = diagonal
        .iter()
        .map(|d| (0..n).map(|i| d.get(i, i).clone()).collect())
        .collect();
    let unknowns = MonomialBasis::filtered(n, degree, |idx| {
        weights.iter().all(|w| {
            idx.iter()
                .fold(Rational::zero(), |acc, &i| acc + &w[i])
                .is_zero()
        })
    });
    debug!(
        "invariant_forms({}, {degree}): {} weight-zero unknowns",
        g.name(),
        unknowns.len()
    );

    let mut rows: BTreeMap<(usize, crate::exterior::MultiIndex), Vec<(usize, Rational)>> =
        BTreeMap::new();
    for (a, op) in other.iter().enumerate() {
        for (col, idx) in unknowns.monomials().iter().enumerate() {
            let mono = AlternatingForm::from_terms(n, degree, [(idx.indices().to_vec(), Rational::one())])?;
            for (target, v) in gl_action(op, &mono)?.terms() {
                rows.entry((a, target.clone())).or_default().push((col, v.clone()));
            }
        }
    }
    let kernel = kernel_of_rows(unknowns.len(), rows.into_values().map(collect_sparse));
    Ok(kernel.basis().iter().map(|v| unknowns.form(v)).collect())
}

fn is_diagonal(m: &Matrix) -> bool {
    (0..m.rows()).all(|r| (0..m.cols()).all(|c| r == c || m.get(r, c).is_zero()))
}

/// Dimensions of the invariant-form spaces for every degree `0..=dim`.
pub fn invariant_profile(g: &LieAlgebra) -> Result<Vec<usize>> {
    (0..=g.dim())
        .map(|l| invariant_forms(g, l).map(|f| f.len()))
        .collect()
}

/// `w(x, y, z) = B([x, y], z)` with `B` the Killing form.
pub fn cartan_three_form(g: &LieAlgebra) -> AlternatingForm {
    let n = g.dim();
    let killing = g.killing_form().matrix;
    let mut terms = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let br = g.bracket_basis(a, b);
            if br.is_empty() {
                continue;
            }
            for c in b + 1..n {
                let v = br
                    .iter()
                    .fold(Rational::zero(), |acc, (k, x)| acc + x * killing.get(*k, c));
                if !v.is_zero() {
                    terms.push((vec![a, b, c], v));
                }
            }
        }
    }
    AlternatingForm::from_terms(n, 3, terms).expect("valid indices")
}

/// `{A ∈ gl(g) : A(w) = 0}` as a subspace of the flattened `n^2` space.
pub fn stabilizer_algebra(g: &LieAlgebra, w: &AlternatingForm) -> Result<Subspace> {
    if w.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: w.dim(),
        });
    }
    Ok(action_as_matrix_in_a(w).kernel())
}

/// Matrices commuting with every `ad(e_i)`.
pub fn centralizer_of_ad(g: &LieAlgebra) -> Subspace {
    let n = g.dim();
    let rows = g.ad_matrices().into_iter().flat_map(move |ad| {
        // [A, ad]_(r,s) = sum_k A_rk ad_ks - ad_rk A_ks
        let mut out = Vec::with_capacity(n * n);
        for r in 0..n {
            for s in 0..n {
                let mut row = Vec::new();
                for k in 0..n {
                    let x = ad.get(k, s);
                    if !x.is_zero() {
                        row.push((r * n + k, x.clone()));
                    }
                    let y = ad.get(r, k);
                    if !y.is_zero() {
                        row.push((k * n + s, -y.clone()));
                    }
                }
                let row = collect_sparse(row);
                if !row.is_empty() {
                    out.push(row);
                }
            }
        }
        out
    });
    kernel_of_rows(n * n, rows)
}

/// `{A ∈ ambient : [A, ad(e_i)] = 0 for all i}`.
pub fn commutant_in(g: &LieAlgebra, ambient: &Subspace) -> Result<Subspace> {
    let n = g.dim();
    if ambient.ambient_dim() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            found: ambient.ambient_dim(),
        });
    }
    if ambient.is_zero() {
        return Ok(Subspace::zero(n * n));
    }
    intersect(ambient, &centralizer_of_ad(g))
}

/// Computable description of `M(g)`: the centralizer of `ad(g)` is the
/// scalars, so `M(g)` is the cyclic group of `l`-th roots of unity acting
/// by scalar multiplication.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MGroup {
    pub degree: usize,
    pub centralizer_dim: usize,
    pub centralizer_is_scalar: bool,
    pub order: usize,
    pub generator: String,
}

pub fn m_group(g: &LieAlgebra, degree: usize) -> Result<MGroup> {
    if degree == 0 {
        return Err(Error::DegreeOutOfRange {
            degree,
            dim: g.dim(),
            min: 1,
            max: usize::MAX,
        });
    }
    let n = g.dim();
    let centralizer = centralizer_of_ad(g);
    let scalar = centralizer.dim() == 1 && centralizer.contains(&Matrix::identity(n).flatten_sparse());
    if !scalar {
        return Err(Error::CentralizerNotScalar(centralizer.dim()));
    }
    let generator = if degree == 1 {
        "identity".to_string()
    } else {
        format!("zeta * I, zeta a primitive {degree}-th root of unity")
    };
    Ok(MGroup {
        degree,
        centralizer_dim: centralizer.dim(),
        centralizer_is_scalar: scalar,
        order: degree,
        generator,
    })
}

/// Checks on the stabilizer of one invariant form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormRecord {
    /// `basis[i]` or `combination[i]`.
    pub label: String,
    /// Coefficients on the invariant basis, as `p/q` strings.
    pub coefficients: Vec<String>,
    pub terms: usize,
    pub stabilizer_dim: usize,
    pub contains_ad: bool,
    pub equals_ad: bool,
    pub stab_semisimple: bool,
    pub stab_center_dim: usize,
    pub commutant_dim: usize,
    pub trace_zero: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub algebra: String,
    pub dim: usize,
    pub degree: usize,
    pub seed: u64,
    pub dim_invariant_forms: usize,
    /// No invariant form of this degree exists; the claim holds vacuously.
    pub vacuous: bool,
    pub forms: Vec<FormRecord>,
    pub m_group: MGroup,
    pub pass: bool,
}

/// Checks the stabilizer of a single form against `ad(g)`.
pub fn check_form(
    g: &LieAlgebra,
    ad: &Subspace,
    w: &AlternatingForm,
    label: String,
    coefficients: &[Rational],
) -> Result<FormRecord> {
    let n = g.dim();
    let stab = stabilizer_algebra(g, w)?;
    let mats = stab.basis_matrices()?;
    let semisimple = !mats.is_empty()
        && match is_semisimple(&mats) {
            Ok(check) => check.semisimple,
            Err(Error::NotClosed(i, j)) => {
                log::warn!("stabilizer of {label} not closed at ({i}, {j})");
                false
            }
            Err(e) => return Err(e),
        };
    let center = if mats.is_empty() {
        Subspace::zero(n * n)
    } else {
        center_of_subalgebra(&mats)?
    };
    let commutant = commutant_in(g, &stab)?;
    let record = FormRecord {
        label,
        coefficients: coefficients.iter().map(|c| c.to_string()).collect(),
        terms: w.len(),
        stabilizer_dim: stab.dim(),
        contains_ad: stab.contains_subspace(ad),
        equals_ad: &stab == ad,
        stab_semisimple: semisimple,
        stab_center_dim: center.dim(),
        commutant_dim: commutant.dim(),
        trace_zero: mats.iter().all(|m| m.trace().is_zero()),
        pass: false,
    };
    let pass = record.contains_ad
        && record.equals_ad
        && record.stab_semisimple
        && record.stab_center_dim == 0
        && record.commutant_dim == 0
        && record.trace_zero;
    Ok(FormRecord { pass, ..record })
}

/// Small-height nonzero rational: numerator in `±1..=4`, denominator `1..=4`.
fn random_coefficient(rng: &mut ChaCha8Rng) -> Rational {
    let mut num: i64 = rng.gen_range(1..=4);
    if rng.gen_bool(0.5) {
        num = -num;
    }
    rat(num, rng.gen_range(1..=4))
}

/// Full pipeline for one degree `1 <= l < dim g`: every invariant basis form
/// and [`RANDOM_COMBINATIONS`] seeded combinations of them must have
/// stabilizer exactly `ad(g)`, and `M(g)` must be cyclic of order `l`.
pub fn verify_stabilizers(g: &LieAlgebra, degree: usize, seed: u64) -> Result<VerificationReport> {
    let n = g.dim();
    if degree == 0 || degree >= n {
        return Err(Error::DegreeOutOfRange {
            degree,
            dim: n,
            min: 1,
            max: n.saturating_sub(1),
        });
    }
    let basis = invariant_forms(g, degree)?;
    info!("{} degree {degree}: {} invariant forms", g.name(), basis.len());
    let ad = g.ad_subalgebra()?;

    let mut candidates: Vec<(String, Vec<Rational>, AlternatingForm)> = Vec::new();
    for (i, w) in basis.iter().enumerate() {
        let mut coeffs = vec![Rational::zero(); basis.len()];
        coeffs[i] = Rational::one();
        candidates.push((format!("basis[{i}]"), coeffs, w.clone()));
    }
    if !basis.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for c in 0..RANDOM_COMBINATIONS {
            let coeffs: Vec<Rational> = basis.iter().map(|_| random_coefficient(&mut rng)).collect();
            let mut w = AlternatingForm::zero(n, degree);
            for (k, f) in coeffs.iter().zip(&basis) {
                w = w.add_scaled(k, f)?;
            }
            candidates.push((format!("combination[{c}]"), coeffs, w));
        }
    }

    let forms = candidates
        .into_iter()
        .map(|(label, coeffs, w)| {
            debug!("checking {label}");
            check_form(g, &ad, &w, label, &coeffs)
        })
        .collect::<Result<Vec<_>>>()?;
    let m_group = m_group(g, degree)?;
    let pass = forms.iter().all(|f| f.pass)
        && m_group.centralizer_dim == 1
        && m_group.centralizer_is_scalar
        && m_group.order == degree;
    Ok(VerificationReport {
        algebra: g.name().to_string(),
        dim: n,
        degree,
        seed,
        dim_invariant_forms: basis.len(),
        vacuous: basis.is_empty(),
        forms,
        m_group,
        pass,
    })
}

/// `true` iff `c I` acts on `w` as multiplication by `-c l`.
pub fn scalar_action_holds(c: &Rational, w: &AlternatingForm) -> Result<bool> {
    let lhs = gl_action(&Matrix::scalar(w.dim(), c.clone()), w)?;
    let rhs = w.scale(&(-c * int(w.degree() as i64)));
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::Series;

    fn sl(n: usize) -> LieAlgebra {
        LieAlgebra::build(Series::A, n).unwrap()
    }

    #[test]
    fn sl2_invariants_by_degree() {
        let g = sl(1);
        assert!(invariant_forms(&g, 1).unwrap().is_empty());
        assert!(invariant_forms(&g, 2).unwrap().is_empty());
        let three = invariant_forms(&g, 3).unwrap();
        assert_eq!(three.len(), 1);
        assert_eq!(three[0], AlternatingForm::monomial(3, &[0, 1, 2]).unwrap());
        assert!(invariant_forms(&g, 4).is_err());
    }

    #[test]
    fn sl2_cartan_form() {
        let w = cartan_three_form(&sl(1));
        assert_eq!(w, AlternatingForm::monomial(3, &[0, 1, 2]).unwrap().scale(&int(8)));
    }

    #[test]
    fn cartan_form_is_invariant() {
        let g = sl(2);
        let w = cartan_three_form(&g);
        for ad in g.ad_matrices() {
            assert!(gl_action(&ad, &w).unwrap().is_zero());
        }
    }

    #[test]
    fn stabilizer_of_zero_form_is_everything() {
        let g = sl(1);
        let s = stabilizer_algebra(&g, &AlternatingForm::zero(3, 2)).unwrap();
        assert_eq!(s.dim(), 9);
    }

    #[test]
    fn sl2_volume_form_stabilizer_is_traceless() {
        let g = sl(1);
        let s = stabilizer_algebra(&g, &cartan_three_form(&g)).unwrap();
        assert_eq!(s.dim(), 8);
        let traceless = Matrix::identity(3).flatten_sparse();
        // traceless matrices = annihilator of the identity under the trace pairing
        let expected = Subspace::from_sparse(9, [traceless]).annihilator();
        assert_eq!(s, expected);
    }

    #[test]
    fn commutant_examples() {
        let g = sl(1);
        let full = commutant_in(&g, &Subspace::full(9)).unwrap();
        assert_eq!(full.dim(), 1);
        assert!(full.contains(&Matrix::identity(3).flatten_sparse()));
        assert!(commutant_in(&g, &Subspace::zero(9)).unwrap().is_zero());
        assert!(commutant_in(&g, &Subspace::full(4)).is_err());
    }

    #[test]
    fn m_group_examples() {
        let g = sl(1);
        let m = m_group(&g, 3).unwrap();
        assert_eq!((m.order, m.centralizer_dim), (3, 1));
        let trivial = m_group(&g, 1).unwrap();
        assert_eq!(trivial.order, 1);
        assert_eq!(trivial.generator, "identity");
        assert!(m_group(&g, 0).is_err());
    }

    #[test]
    fn verify_rejects_degree_at_dimension() {
        assert!(matches!(
            verify_stabilizers(&sl(1), 3, DEFAULT_SEED),
            Err(Error::DegreeOutOfRange { .. })
        ));
    }

    #[test]
    fn sl3_degree_three_passes() {
        let r = verify_stabilizers(&sl(2), 3, DEFAULT_SEED).unwrap();
        assert!(r.pass);
        assert_eq!(r.dim_invariant_forms, 1);
        assert_eq!(r.forms.len(), 1 + RANDOM_COMBINATIONS);
        assert!(r.forms.iter().all(|f| f.stabilizer_dim == 8 && f.equals_ad));
    }

    #[test]
    fn sl3_degree_four_is_vacuous() {
        let r = verify_stabilizers(&sl(2), 4, DEFAULT_SEED).unwrap();
        assert!(r.pass && r.vacuous);
        assert_eq!(r.dim_invariant_forms, 0);
        assert!(r.forms.is_empty());
    }

    #[test]
    fn scalar_action_on_cartan_form() {
        let w = cartan_three_form(&sl(2));
        assert!(scalar_action_holds(&rat(-7, 3), &w).unwrap());
    }
}
