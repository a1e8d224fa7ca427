use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Io(String),
    #[error("inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Core(#[from] capelli_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Inconsistent(_) | CliError::Core(capelli_core::Error::Inconsistent(_)) => 3,
            _ => 2,
        }
    }
}
