use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p = {0} is not an odd prime")]
    BadPrime(u32),

    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),

    #[error("level mismatch: {0}")]
    LevelMismatch(String),

    #[error("series diverges: {0}")]
    Divergent(String),

    #[error("{0} is not a unit")]
    NotUnit(String),

    #[error("division by zero in {0}")]
    DivisionByZero(String),

    #[error("precision exhausted in {0}")]
    PrecisionExhausted(String),

    #[error("exponent window overflow: exponent {exponent} does not fit below {window}")]
    WindowOverflow { exponent: u64, window: u64 },

    #[error("point outside the disk: {0}")]
    OutsideDisk(String),

    #[error("hensel lifting failed: {0}")]
    Hensel(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("certificate failed: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
