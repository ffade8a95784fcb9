use thiserror::Error;

/// Errors reported by every fallible operation of the crate.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("undeclared argument `{0}`")]
    UndeclaredArgument(String),
    #[error("duplicate argument declaration `{0}`")]
    DuplicateArgument(String),
    #[error("mixed rejection-condition modes: {0}")]
    MixedModes(String),
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("unknown argument `{0}`")]
    UnknownArgument(String),
    #[error("{what} has size {size}, exceeding the configured cap of {cap}")]
    CapExceeded { what: &'static str, size: usize, cap: usize },
    #[error("unassigned variable `{0}`")]
    Unassigned(String),
    #[error("wrong rejection-condition class: expected {expected}, found {found}")]
    WrongClass { expected: String, found: String },
    #[error("invalid tree decomposition: {0}")]
    InvalidTd(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("malformed QBF: {0}")]
    Qbf(String),
    #[error("program is not tight")]
    NotTight,
}

pub type Result<T> = std::result::Result<T, Error>;
