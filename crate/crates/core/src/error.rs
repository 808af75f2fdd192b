use thiserror::Error;

use crate::protocol::Outcome;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid density operator: {0}")]
    InvalidState(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid subsystem selection: {0}")]
    InvalidKeepSet(String),

    #[error("negative evolution time {0}")]
    NegativeTime(f64),

    #[error("Pauli expectation has imaginary part {imag:e}; input is not Hermitian")]
    NonHermitian { imag: f64 },

    #[error("value {0} outside the domain [0, 1]")]
    Domain(f64),

    #[error("outcome {outcome:?} has probability {probability:e}; conditional state undefined")]
    DegenerateOutcome { outcome: Outcome, probability: f64 },

    #[error("operation not available for this noise model: {0}")]
    UnsupportedNoise(&'static str),

    #[error("reconstructed operator is not positive (smallest eigenvalue {min_eigenvalue:e})")]
    NonPhysical { min_eigenvalue: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
