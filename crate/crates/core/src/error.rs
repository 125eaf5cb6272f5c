use thiserror::Error;

/// Errors raised by the fitting and geometry routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point outside the model domain: {0}")]
    Domain(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("parameters are not identifiable: {0}")]
    Unidentifiable(String),

    #[error("divergence has no interior minimum: {0}")]
    NoInteriorMinimum(String),

    #[error(
        "solver did not converge after {iterations} iterations (gradient norm {gradient_norm:e})"
    )]
    NoConvergence {
        iterations: usize,
        gradient_norm: f64,
    },

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("basis is not orthonormal (Gram deviation {0:e})")]
    NonOrthonormalBasis(f64),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("dimension mismatch: {expected} vs {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not diagonal in the conditioning basis (off-diagonal norm {0:e})")]
    NotDiagonal(f64),

    #[error(
        "support of the first argument is not contained in the support of the second (leak {0:e})"
    )]
    SupportViolation(f64),

    #[error("model generators are ill-conditioned (Gram condition number {0:e})")]
    IllConditionedModel(f64),

    #[error("pre- and post-selected states are orthogonal")]
    OrthogonalSelection,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "DomainError",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::Unidentifiable(_) => "Unidentifiable",
            Error::NoInteriorMinimum(_) => "NoInteriorMinimum",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::ZeroVector => "ZeroVector",
            Error::NonOrthonormalBasis(_) => "NonOrthonormalBasis",
            Error::NotHermitian(_) => "NotHermitian",
            Error::NotPositive(_) => "NotPositive",
            Error::InvalidTrace(_) => "InvalidTrace",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotDiagonal(_) => "NotDiagonal",
            Error::SupportViolation(_) => "SupportViolation",
            Error::IllConditionedModel(_) => "IllConditionedModel",
            Error::OrthogonalSelection => "OrthogonalSelection",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
