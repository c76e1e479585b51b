use thiserror::Error;

/// Errors produced by fitting routines and the benchmark harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix size mismatch: {0}")]
    SizeMismatch(String),
    #[error("duplicate sample points")]
    DuplicatePoints,
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("eigenvalue iteration failed to converge")]
    EigFailure,
    #[error("Chebyshev expansion not resolved by degree {0}")]
    NotResolved(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
