use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("unsupported algebra: {0}")]
    Unsupported(String),

    #[error("degree {degree} out of range for an algebra of dimension {dim} (allowed {min}..={max})")]
    DegreeOutOfRange {
        degree: usize,
        dim: usize,
        min: usize,
        max: usize,
    },

    #[error("vectors are linearly dependent")]
    LinearlyDependent,

    #[error("basis is not closed under the commutator: [b{0}, b{1}] leaves the span")]
    NotClosed(usize, usize),

    #[error("the zero form has no witness")]
    ZeroForm,

    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid alternating form: {0}")]
    InvalidForm(String),

    #[error("centralizer of ad(g) is not the scalars (dimension {0}); construction bug")]
    CentralizerNotScalar(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
