use std::io;

use thiserror::Error;

/// Failure classes of the command-line front end, each with its own exit
/// status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<rowtopk::Error> for CliError {
    fn from(e: rowtopk::Error) -> Self {
        use rowtopk::Error as E;
        match e {
            E::Io(_) | E::BadMagic { .. } | E::UnsupportedVersion(_) | E::TruncatedFile { .. } => {
                CliError::Io(e.to_string())
            }
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(format!("I/O failure: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
