use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("unsupported search space: {0}")]
    UnsupportedSpace(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid dimension {0}: must be even and at least 2")]
    InvalidDimension(usize),

    #[error("coherence is undefined for a dictionary with {0} row(s)")]
    UndefinedCoherence(usize),

    #[error("enumeration over dimension {d} exceeds the limit of {limit}")]
    EnumerationTooLarge { d: usize, limit: usize },

    #[error("kernel matrix is ill-conditioned (cholesky failed at jitter {jitter:e})")]
    IllConditioned { jitter: f64 },

    #[error("hyperparameter fit failed: {0}")]
    FitFailed(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
