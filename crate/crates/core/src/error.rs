use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("symbol `{symbol}` has arity {expected}, got {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },

    #[error("element {element} is outside the universe of size {size}")]
    OutOfRange { element: usize, size: usize },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("variable x{index} exceeds declared arity {arity}")]
    VariableOutOfRange { index: usize, arity: usize },

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("constant `{0}` lies outside the chosen subset")]
    ConstantOutsideSubset(String),

    #[error("morphisms {after} and {before} are not composable")]
    NotComposable { after: usize, before: usize },

    #[error("invalid category: {0}")]
    InvalidCategory(String),

    #[error("invalid expansion: {0}")]
    InvalidExpansion(String),

    #[error("restriction is not unique: {0}")]
    RestrictionNotUnique(String),

    #[error("search guard exceeded: {what} needs {needed} items, limit is {limit}")]
    GuardExceeded { what: String, needed: u64, limit: u64 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

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
        Error::Invalid(e.to_string())
    }
}
