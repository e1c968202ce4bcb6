use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// Variants split into two families: precondition failures (bad input,
/// wrong shapes, out-of-range parameters) and [`Error::Tripwire`], which
/// signals that a numerical result contradicted a proven identity.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid degree {degree} for ambient dimension {dim}")]
    InvalidDegree { degree: usize, dim: usize },

    #[error("invalid multi-index {indices:?} for dimension {dim}")]
    InvalidMultiIndex { indices: Vec<usize>, dim: usize },

    #[error("expected {expected} vectors, found {found}")]
    WrongVectorCount { expected: usize, found: usize },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has odd dimension {0}; an even dimension 2n is required")]
    OddDimension(usize),

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix is too ill-conditioned (condition number {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("matrix is singular")]
    Singular,

    #[error("frame is not orthonormal (Gram residual {residual:e})")]
    NotOrthonormal { residual: f64 },

    #[error("vectors are linearly dependent (pivot {pivot:e} at position {index})")]
    LinearlyDependent { index: usize, pivot: f64 },

    #[error("map is not complex-linear (commutator residual {residual:e})")]
    NotComplexLinear { residual: f64 },

    #[error("unknown form name `{0}`")]
    UnknownForm(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("tripwire: {0}")]
    Tripwire(String),
}

impl Error {
    /// True for numerical contradictions of proven identities.
    pub fn is_tripwire(&self) -> bool {
        matches!(self, Error::Tripwire(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
