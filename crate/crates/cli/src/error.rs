use thiserror::Error;

/// Failures of a command, each mapped to a documented process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{0}")]
    Nyquist(lattice_wigner::Error),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::CheckFailed(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Nyquist(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub(crate) fn io(path: &std::path::Path, err: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl From<lattice_wigner::Error> for CliError {
    fn from(err: lattice_wigner::Error) -> Self {
        match err {
            lattice_wigner::Error::Nyquist { .. } => CliError::Nyquist(err),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
