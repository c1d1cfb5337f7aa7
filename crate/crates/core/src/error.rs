use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,

    #[error("expected {expected} entries for the declared dimension, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not square: {rows} x {cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is singular: zero pivot in column {column} of the LU factorization")]
    SingularMatrix { column: usize },

    #[error("numerical breakdown in {context}: {detail}")]
    NumericalBreakdown { context: &'static str, detail: String },

    #[error("fixed-point map evaluated outside its domain at x = {x:e} (denominator {denominator:e})")]
    DomainExceeded { x: f64, denominator: f64 },

    #[error("root is not bracketed on [{lo:e}, {hi:e}]: relative residuals {g_lo:e} and {g_hi:e} share a sign")]
    BracketFailure { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },

    #[error("{method} did not converge after {iterations} iterations (off-diagonal mass {off:e})")]
    NotConverged { method: &'static str, iterations: usize, off: f64 },

    #[error("closed-form eigenvalues are only available for n <= 3, got n = {0}")]
    UnsupportedDimension(usize),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported MatrixMarket qualifier `{0}`: only `general` matrices are accepted")]
    UnsupportedQualifier(String),

    #[error("invalid ensemble spec: {0}")]
    InvalidSpec(String),

    #[error("invalid solver config: {0}")]
    InvalidConfig(String),

    #[error("could not draw a nonsingular {family} matrix after {attempts} attempts")]
    GenerationFailed { family: String, attempts: usize },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
