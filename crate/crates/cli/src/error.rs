use std::fmt;
use std::process::ExitCode;

use ghz_decay::Error;

#[derive(Debug)]
pub enum CliError {
    /// Invalid flags, config file, or inputs.
    Config(String),
    /// A dense matrix would exceed the cap.
    Capacity(String),
    /// The state has no entanglement, so no critical strength exists.
    Degenerate(String),
    /// At least one verification instance missed its tolerance.
    VerifyFailed(String),
    /// Reading or writing files.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Capacity(_) => 3,
            CliError::Degenerate(_) => 4,
            CliError::VerifyFailed(_) => 5,
        })
    }

    /// Attach the flag a library error came from.
    pub fn field(field: &str, err: Error) -> Self {
        match err {
            Error::Capacity { .. } => CliError::Capacity(format!("--{field}: {err}")),
            other => CliError::Config(format!("--{field}: {other}")),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::Capacity { .. } => CliError::Capacity(err.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Capacity(m) => write!(f, "capacity error: {m}"),
            CliError::Degenerate(m) => write!(f, "degenerate state: {m}"),
            CliError::VerifyFailed(m) => write!(f, "verification failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}
