use thiserror::Error;

/// Failure of a command, classified by exit status.
#[derive(Debug, Error, PartialEq)]
pub enum CliError {
    /// Bad configuration, flags or input files. Exit status 2.
    #[error("{0}")]
    Validation(String),
    /// A problem larger than the solvers accept. Exit status 3.
    #[error("{0}")]
    Capacity(String),
    /// Reading or writing files failed. Exit status 1.
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Capacity(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<lifthom_core::Error> for CliError {
    fn from(e: lifthom_core::Error) -> Self {
        match e {
            lifthom_core::Error::Capacity(_) => CliError::Capacity(e.to_string()),
            lifthom_core::Error::Io(_) => CliError::Io(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
