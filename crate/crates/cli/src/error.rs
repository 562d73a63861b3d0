use std::path::Path;

/// Failure classes, each with its own process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }

    pub(crate) fn io(path: &Path, e: std::io::Error) -> CliError {
        CliError::Data(format!("{}: {e}", path.display()))
    }
}

impl From<curvestat::Error> for CliError {
    fn from(e: curvestat::Error) -> Self {
        CliError::Numeric(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}
