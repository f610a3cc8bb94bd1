use thiserror::Error;

use crate::problem::Violation;

#[derive(Debug, Error)]
pub enum OmvError {
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    Invalid(#[from] Violation),

    #[error("chain error: {0}")]
    Chain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unsatisfiable instance spec: {0}")]
    Unsatisfiable(String),
}

pub type Result<T, E = OmvError> = std::result::Result<T, E>;

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(OmvError::DimensionMismatch { expected, got })
    }
}
