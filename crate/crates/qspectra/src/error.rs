use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix dimension must be even, got {0}")]
    OddDimension(usize),
    #[error("matrix is not Hermitian: deviation {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },
    #[error("eigensolver failed to converge after {0} iterations")]
    NoConvergence(usize),
    #[error("quadrature did not reach tolerance {tol:.3e} (best error estimate {estimate:.3e})")]
    Quadrature { tol: f64, estimate: f64 },
    #[error("no root in the upper half-plane (branch selection failed)")]
    BranchFailure,
    #[error("degenerate point: {0}")]
    Degenerate(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("truncated moments unavailable: {0}")]
    UnsupportedTruncation(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
