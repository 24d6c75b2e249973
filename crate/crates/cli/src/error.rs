use std::path::PathBuf;
use std::process::ExitCode;

/// Categorized failures; each category maps to a fixed exit code so scripts
/// can tell configuration mistakes from numerics from I/O.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(qanneal::CoreError),
    Io { path: PathBuf, source: std::io::Error },
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) => ExitCode::from(2),
            CliError::Numeric(_) => ExitCode::from(3),
            CliError::Io { .. } => ExitCode::from(4),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config: {msg}"),
            CliError::Numeric(e) => write!(f, "numeric: {e}"),
            CliError::Io { path, source } => write!(f, "io: {}: {source}", path.display()),
        }
    }
}

impl From<qanneal::CoreError> for CliError {
    fn from(e: qanneal::CoreError) -> Self {
        match e {
            qanneal::CoreError::InvalidParams(msg) => CliError::Config(msg),
            other => CliError::Numeric(other),
        }
    }
}
