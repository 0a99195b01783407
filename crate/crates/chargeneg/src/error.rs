use chargeneg_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("format error: {0}")]
    Format(String),
    #[error("acceptance check failed: {0}")]
    Acceptance(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    /// 1 for bad input (including requests over a resource cap), 2 for
    /// numerical failure, 3 for a failed check.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) | CliError::Format(_) => 1,
            CliError::Core(CoreError::InvalidArgument(_) | CoreError::ResourceLimit(_)) => 1,
            CliError::Core(CoreError::NumericalFailure(_)) => 2,
            CliError::Acceptance(_) => 3,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Format(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Format(e.to_string())
    }
}
