use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("not a valid density matrix: {0}")]
    InvalidState(String),

    #[error("probabilities must sum to 1 (sum = {0})")]
    BadDistribution(f64),

    #[error("vector is not normalized (norm = {0})")]
    Unnormalized(f64),

    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),

    #[error("degenerate parameters: {0}")]
    DegenerateParameters(&'static str),

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
