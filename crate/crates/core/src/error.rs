use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("size guard: {0}")]
    TooLarge(String),
    #[error("vector is not in the kernel of the net reaction matrix")]
    NotInKernel,
    #[error("assembled realization failed verification: {0}")]
    VerificationFailed(String),
    #[error("unsatisfiable generator spec: {0}")]
    Unsatisfiable(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
