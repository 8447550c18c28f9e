//! Exact computational tools for adjoint-invariant alternating forms on
//! split simple Lie algebras and their stabilizer subalgebras in `gl(g)`.

pub mod error;
pub mod exterior;
pub mod json;
pub mod liealg;
pub mod linalg;
pub mod stab;

pub use error::{Error, Result};
pub use exterior::{
    action_as_matrix_in_a, gl_action, monomial_equivalent, sl_witness, wedge, AlternatingForm,
    MonomialBasis, MultiIndex,
};
pub use liealg::{
    center_of_subalgebra, is_irreducible, is_semisimple, BilinearForm, CartanType, Endomorphism,
    LieAlgebra, Series,
};
pub use linalg::{
    associative_closure, intersect, kernel, rank, Matrix, Rational, SparseMatrix, Subspace,
};
pub use stab::{
    cartan_three_form, centralizer_of_ad, commutant_in, invariant_forms, invariant_profile,
    m_group, stabilizer_algebra, verify_stabilizers, FormRecord, MGroup, VerificationReport,
    DEFAULT_SEED,
};
