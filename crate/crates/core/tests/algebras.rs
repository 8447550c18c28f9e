//! Structural checks on every built algebra, against oracles that do not go
//! through the structure-constant tables.

use formstab_core::linalg::int;
use formstab_core::{
    associative_closure, invariant_forms, invariant_profile, is_irreducible, wedge, LieAlgebra,
    Matrix, Rational, Series,
};
use num_traits::Zero;

/// Every supported type within the default size cap (dim <= 30).
fn capped_algebras() -> Vec<LieAlgebra> {
    [
        (Series::A, 1),
        (Series::A, 2),
        (Series::A, 3),
        (Series::A, 4),
        (Series::B, 2),
        (Series::B, 3),
        (Series::C, 3),
        (Series::D, 4),
        (Series::G, 2),
    ]
    .into_iter()
    .map(|(s, r)| LieAlgebra::build(s, r).unwrap())
    .collect()
}

#[test]
fn structure_invariants_hold_for_all_types() {
    for g in capped_algebras() {
        let n = g.dim();
        assert!(g.is_antisymmetric(), "{}", g.name());
        assert_eq!(g.jacobi_violation(), None, "{}", g.name());
        let b = g.killing_form();
        assert!(b.is_symmetric());
        assert_eq!(b.rank(), n, "Killing form of {} degenerate", g.name());
        assert_eq!(g.ad_subalgebra().unwrap().dim(), n);
        for ad in g.ad_matrices() {
            assert!(ad.trace().is_zero());
        }
    }
}

#[test]
fn derived_algebra_is_everything() {
    // trace(ad x) = 0 follows from g = [g, g]; check the latter directly.
    for g in capped_algebras() {
        let n = g.dim();
        let brackets = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        let span = formstab_core::Subspace::from_sparse(
            n,
            brackets.map(|(i, j)| g.bracket_basis(i, j).clone()),
        );
        assert_eq!(span.dim(), n, "{}", g.name());
    }
}

/// For `sl(m)` the Killing form is `2m tr(XY)` in the defining
/// representation. The defining matrices are rebuilt here from the
/// documented basis order.
#[test]
fn sl_killing_matches_trace_form() {
    for m in 2..=4usize {
        let g = LieAlgebra::build(Series::A, m - 1).unwrap();
        let mut mats = Vec::new();
        for i in 0..m - 1 {
            let mut h = Matrix::zeros(m, m);
            h.set(i, i, int(1));
            h.set(i + 1, i + 1, int(-1));
            mats.push(h);
        }
        let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
        mats.extend(pairs.iter().map(|&(i, j)| Matrix::unit(m, i, j)));
        mats.extend(pairs.iter().map(|&(i, j)| Matrix::unit(m, j, i)));
        assert_eq!(mats.len(), g.dim());

        let b = g.killing_form();
        for (i, x) in mats.iter().enumerate() {
            for (j, y) in mats.iter().enumerate() {
                let expected = (x * y).trace() * int(2 * m as i64);
                assert_eq!(b.matrix.get(i, j), &expected, "sl({m}) ({i},{j})");
            }
        }
    }
}

#[test]
fn adjoint_representation_is_irreducible() {
    for g in capped_algebras().into_iter().filter(|g| g.dim() <= 15) {
        assert!(is_irreducible(&g.ad_matrices()).unwrap(), "{}", g.name());
    }
}

#[test]
fn burnside_closure_sl2_is_full() {
    let g = LieAlgebra::build(Series::A, 1).unwrap();
    assert_eq!(associative_closure(&g.ad_matrices()).unwrap().dim(), 9);
}

#[test]
fn profiles_of_small_algebras() {
    let cases: [(Series, usize, &[usize]); 3] = [
        (Series::A, 1, &[1, 0, 0, 1]),
        (Series::A, 2, &[1, 0, 0, 1, 0, 1, 0, 0, 1]),
        (Series::B, 2, &[1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1]),
    ];
    for (s, r, expected) in cases {
        let g = LieAlgebra::build(s, r).unwrap();
        assert_eq!(invariant_profile(&g).unwrap(), expected, "{}", g.name());
    }
}

/// The invariant ring is an exterior algebra on `rank` generators, so the
/// profile is palindromic with total dimension `2^rank`.
#[test]
fn profile_totals_are_powers_of_two() {
    for (s, r) in [(Series::A, 3), (Series::G, 2)] {
        let g = LieAlgebra::build(s, r).unwrap();
        let p = invariant_profile(&g).unwrap();
        assert!(p.iter().eq(p.iter().rev()), "{}: {p:?}", g.name());
        assert_eq!(p.iter().sum::<usize>(), 1 << r, "{}: {p:?}", g.name());
    }
}

#[test]
fn g2_profile_degrees() {
    let g = LieAlgebra::build(Series::G, 2).unwrap();
    let p = invariant_profile(&g).unwrap();
    let nonzero: Vec<usize> = (0..p.len()).filter(|&l| p[l] > 0).collect();
    assert_eq!(nonzero, [0, 3, 11, 14]);
}

#[test]
fn sl3_wedge_of_generators_is_top_form() {
    let g = LieAlgebra::build(Series::A, 2).unwrap();
    let w3 = &invariant_forms(&g, 3).unwrap()[0];
    let w5 = &invariant_forms(&g, 5).unwrap()[0];
    let w8 = &invariant_forms(&g, 8).unwrap()[0];
    let prod = wedge(w3, w5).unwrap();
    assert!(!prod.is_zero());
    let (idx, c) = w8.terms().next().unwrap();
    let ratio = prod.coefficient(idx) / c;
    assert_eq!(prod, w8.scale(&ratio));
}

#[test]
fn bracket_dimension_mismatch() {
    let g = LieAlgebra::build(Series::A, 1).unwrap();
    let short = vec![Rational::zero(); 2];
    let ok = vec![Rational::zero(); 3];
    assert!(g.bracket(&short, &ok).is_err());
    assert!(g.ad(&short).is_err());
}
