use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum QfiError {
    /// Input violates a structural precondition (non-Hermitian matrix,
    /// non-normalized state, empty range, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// Input is outside the mathematical domain of the operation
    /// (negative temperature, T = 0 for a Curie-type quantity, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Operands have incompatible dimensions.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Request exceeds the dense exact-diagonalization limits.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// Malformed input data; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Rescaled collapse curves share too little support to compare.
    #[error("insufficient data overlap after rescaling: {0}")]
    CollapseOverlap(String),

    /// The dense eigensolver failed to converge.
    #[error("eigendecomposition failed: {0}")]
    Eigensolver(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, QfiError>;

impl QfiError {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        QfiError::Validation(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        QfiError::Domain(msg.into())
    }
}
