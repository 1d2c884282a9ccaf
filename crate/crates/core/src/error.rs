use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("validation error: {key}: {constraint}")]
    Validation { key: String, constraint: String },

    #[error("unsupported domain for {op}: requires {expected}")]
    UnsupportedDomain { op: &'static str, expected: &'static str },

    #[error("grid mismatch between operands")]
    GridMismatch,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("domain error: {0}")]
    DomainArg(String),

    #[error("time step {dt} exceeds CFL limit {limit}")]
    CflViolation { dt: f64, limit: f64 },

    #[error("numerical blowup at t = {t}")]
    Blowup { t: f64 },

    #[error("tracer within {dist:.3e} of a segment endpoint at t = {t}")]
    DegenerateTracer { t: f64, dist: f64 },

    #[error("scenario hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
