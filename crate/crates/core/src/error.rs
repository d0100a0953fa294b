use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {0}: a qudit needs at least two levels")]
    InvalidDimension(usize),

    #[error("digit {digit} is out of range for base {base}")]
    InvalidDigit { digit: u32, base: u32 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("phase oracle returned a non-finite phase at delay {delay:e} s")]
    Oracle { delay: f64 },

    #[error("root finder failed: {0}")]
    SolverFailure(String),

    #[error("inconsistent pulse solution: {0}")]
    InconsistentSolution(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("malformed data: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
