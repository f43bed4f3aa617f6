use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("{0} is not a power of an odd prime")]
    NotPrimePower(u64),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("polynomial {0} is not irreducible over its base")]
    Reducible(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("twist mismatch: {0} vs {1}")]
    TwistMismatch(String, String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(i64, i64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("not regular at {0}")]
    NotRegular(String),
    #[error("extension is inseparable")]
    Inseparable,
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}
