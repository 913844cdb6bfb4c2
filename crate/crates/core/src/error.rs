use thiserror::Error;

/// Errors raised by the library. Variants map onto the CLI exit codes:
/// [`Error::Budget`] exits with 3, everything else reported as a check
/// failure exits with 1.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid modulus {0}: must be at least 1")]
    InvalidModulus(u64),

    #[error("{d} is not a divisor of {m}")]
    NotADivisor { d: u64, m: u64 },

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("rule is not closed under the dihedral action (use the negated rule)")]
    NotClosedUnderD3,

    #[error("sequence is not antisymmetric")]
    NotAntisymmetric,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("enumeration budget exceeded: need {needed} cells, cap is {cap}")]
    Budget { needed: u128, cap: u128 },

    #[error("verification failed: {0}")]
    Contradiction(String),

    #[error("parse error: {0}")]
    Parse(String),

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
        Error::Parse(e.to_string())
    }
}
