//! Error type shared by all modules of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    /// Input data violates a structural precondition (non-finite entries,
    /// empty matrix, index out of range).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A parameter is outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The input is structurally valid but degenerate for the requested
    /// operation (zero matrix, empty sampling support).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Shapes of the operands do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The operation would materialize a simulation object larger than the
    /// explicit-dilation size guard allows.
    #[error("simulation size limit exceeded: {0}")]
    SizeLimit(String),

    /// Grid certification of a polynomial failed even at the degree cap.
    #[error("polynomial construction failed: {0}")]
    PolynomialConstruction(String),

    /// A linear system that should have been positive definite was not.
    #[error("ill-posed system: {0}")]
    IllPosed(String),
}

impl CoreError {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        CoreError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CoreError>;
