use thiserror::Error;

/// Errors produced by the tensor, solver, and I/O layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid tensor order {0}: order must be even and at least 2")]
    InvalidOrder(usize),

    #[error("invalid tensor dimension {0}: dimension must be at least 1")]
    InvalidDimension(usize),

    #[error("value buffer has {actual} entries, expected {expected} (dim^order)")]
    BadValueCount { expected: usize, actual: usize },

    #[error("order/dimension mismatch between tensor ({a_order}, {a_dim}) and metric ({b_order}, {b_dim})")]
    ShapeMismatch {
        a_order: usize,
        a_dim: usize,
        b_order: usize,
        b_dim: usize,
    },

    #[error("tensor is not symmetric")]
    NotSymmetric,

    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("zero vector has no direction")]
    ZeroVector,

    #[error("zero critical point, no eigenpair")]
    ZeroCriticalPoint,

    #[error("no closed-form bound for metric kind {0}")]
    NoClosedFormBound(&'static str),

    #[error("non-finite objective or gradient at the starting point")]
    NonFiniteStart,

    #[error("shift annihilated iterate")]
    ShiftAnnihilated,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}
