use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input is not integral: {0}")]
    NotIntegral(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration guard exceeded: {points} points > limit {limit} (use --force to override)")]
    GuardExceeded { points: u128, limit: u128 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("singular matrix")]
    SingularMatrix,

    #[error("not a similitude: {0}")]
    NotSimilitude(String),

    #[error("moduli mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("inconsistent count: {0}")]
    InconsistentCount(String),

    #[error("denominator does not cancel: {0}")]
    NotLaurent(String),

    #[error("series expansion: {0}")]
    Series(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
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
        Error::Parse(e.to_string())
    }
}
