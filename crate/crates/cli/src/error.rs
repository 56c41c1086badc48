use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable, malformed or schema-violating input.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error(transparent)]
    Core(#[from] byzline_core::Error),

    /// A bound or acceptance item did not hold.
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        use byzline_core::Error as E;
        let code = match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Core(E::Parse { .. }) => 2,
            CliError::Core(E::Precondition(_) | E::DivisionByZero) => 3,
            CliError::Verification(_) => 4,
            CliError::Core(E::Stall { .. } | E::Internal(_)) => 5,
        };
        ExitCode::from(code)
    }
}

pub type CliResult<T> = Result<T, CliError>;
