use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("requested derivative order {requested} exceeds the cap of {cap}")]
    OrderOverflow { requested: usize, cap: usize },

    #[error("invalid interval [{a}, {b}]: need finite a < b")]
    InvalidInterval { a: f64, b: f64 },

    #[error("point {x} lies outside [{a}, {b}]")]
    PointOutsideInterval { x: f64, a: f64, b: f64 },

    #[error("tolerance unreachable within {limit} subdivisions (error estimate {err_estimate:e})")]
    MaxSubdivisions { limit: usize, err_estimate: f64 },

    #[error("integrand returned a non-finite value at t = {t}")]
    NonFiniteSample { t: f64 },

    #[error("parameter out of domain: {0}")]
    ParamOutOfDomain(String),

    #[error("arguments must differ")]
    EqualArguments,

    #[error("unsupported order n = {0}")]
    UnsupportedOrder(i32),

    #[error("group has no valid records: {0}")]
    EmptyGroup(String),

    #[error("corpus line {line}: {message}")]
    CorpusParse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
