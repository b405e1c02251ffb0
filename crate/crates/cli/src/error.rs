use thiserror::Error;

/// Failures surfaced by the command line, each with its exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),

    #[error("{0}")]
    SizeRefused(String),

    #[error("oracle mismatch: {0}")]
    Mismatch(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Invalid(_) | CliError::Io(_) => 2,
            CliError::SizeRefused(_) => 3,
        }
    }
}

impl From<gpb_core::Error> for CliError {
    fn from(e: gpb_core::Error) -> Self {
        match e {
            gpb_core::Error::SizeRefused { .. } => CliError::SizeRefused(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}
