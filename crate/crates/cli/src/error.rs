use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] ptone_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("acceptance failure: {0}")]
    Acceptance(String),
}

impl CliError {
    /// 1 acceptance failure, 2 invalid input, 3 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Acceptance(_) => 1,
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Core(e) if e.is_input_error() => 2,
            CliError::Core(_) => 3,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("config: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e.to_string()))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
