use std::fmt;

use qdent_core::Error as CoreError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Config = 2,
    Verification = 3,
    Internal = 1,
}

#[derive(Debug)]
pub struct CliError {
    pub code: ExitCode,
    pub source: anyhow::Error,
}

impl CliError {
    pub fn config(source: impl Into<anyhow::Error>) -> Self {
        Self {
            code: ExitCode::Config,
            source: source.into(),
        }
    }

    pub fn verification(source: impl Into<anyhow::Error>) -> Self {
        Self {
            code: ExitCode::Verification,
            source: source.into(),
        }
    }

    pub fn internal(source: impl Into<anyhow::Error>) -> Self {
        Self {
            code: ExitCode::Internal,
            source: source.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.source)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::DegenerateOutcome { .. } => Self::verification(e),
            CoreError::InvalidConfig(_)
            | CoreError::NegativeTime(_)
            | CoreError::Domain(_)
            | CoreError::UnsupportedNoise(_)
            | CoreError::InvalidKeepSet(_) => Self::config(e),
            _ => Self::internal(e),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
