use std::fmt;
use std::process::ExitCode;

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    /// An invariant or assertion failed (status 1).
    Assertion(String),
    /// The configuration was rejected (status 2).
    Usage(String),
    /// Reading or writing a file failed (status 3).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            Self::Assertion(_) => 1,
            Self::Usage(_) => 2,
            Self::Io(_) => 3,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Assertion(m) => write!(f, "assertion failed: {m}"),
            Self::Usage(m) => write!(f, "invalid configuration: {m}"),
            Self::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<shiftdyn::Error> for CliError {
    fn from(e: shiftdyn::Error) -> Self {
        Self::Usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
