use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain mismatch: left operand acts on {left}, right operand on {right}")]
    DomainMismatch { left: String, right: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix dimension {dim} exceeds the dense solver limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    /// The Schur iteration did not converge. `subdiagonal` is the largest
    /// remaining subdiagonal magnitude of the Hessenberg form relative to the
    /// matrix norm, which tells how far from deflation the iteration stalled.
    #[error(
        "eigensolver failed to converge on a {dim}x{dim} matrix after {max_iterations} sweeps \
         (relative subdiagonal residual {subdiagonal:.3e})"
    )]
    NoConvergence {
        dim: usize,
        max_iterations: usize,
        subdiagonal: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed operator document: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
