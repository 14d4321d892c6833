use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u32),
    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("sample length {len} is not a power of the base {base}")]
    NotAPowerOfBase { len: usize, base: u32 },
    #[error("non-finite value {value} encountered at x = {x}")]
    NonFinite { x: f64, value: f64 },
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("series diverges: {0}")]
    Divergent(String),
    #[error("size overflow: {0}")]
    Overflow(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn check_base(b: u32) -> Result<()> {
    if b < 2 {
        Err(Error::InvalidBase(b))
    } else {
        Ok(())
    }
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}
