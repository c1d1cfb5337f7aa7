use std::fmt;
use std::path::PathBuf;

use sigmin::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_SINGULAR: u8 = 2;
pub const EXIT_PARSE: u8 = 3;
pub const EXIT_NUMERICAL: u8 = 4;
pub const EXIT_SPEC: u8 = 5;
pub const EXIT_IO: u8 = 6;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e {
                Error::SingularMatrix { .. } => EXIT_SINGULAR,
                Error::Parse { .. }
                | Error::NonSquare { .. }
                | Error::UnsupportedQualifier(_)
                | Error::NonFinite { .. }
                | Error::ShapeMismatch { .. }
                | Error::EmptyMatrix => EXIT_PARSE,
                Error::NumericalBreakdown { .. }
                | Error::DomainExceeded { .. }
                | Error::BracketFailure { .. }
                | Error::NotConverged { .. }
                | Error::UnsupportedDimension(_) => EXIT_NUMERICAL,
                Error::InvalidSpec(_) | Error::InvalidConfig(_) | Error::GenerationFailed { .. } => EXIT_SPEC,
            },
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
