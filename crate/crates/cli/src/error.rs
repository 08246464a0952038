use std::fmt;

/// Failure classes with their process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad configuration file, key, flag value or parameter set. Exit code 2.
    Config(String),
    /// Unreadable or malformed input, unwritable output. Exit code 3.
    Io(String),
    /// Data on which the requested analysis is undefined. Exit code 4.
    Degenerate(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Degenerate(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Degenerate(m) => write!(f, "degenerate data: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<usmc::CorpusError> for CliError {
    fn from(e: usmc::CorpusError) -> Self {
        use usmc::CorpusError as E;
        match e {
            E::InvalidParams(m) => CliError::Config(m),
            E::Empty => CliError::Degenerate(e.to_string()),
            other => CliError::Io(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn io_err(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}
