use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    /// A computation would exceed the configured size budget.
    #[error("resource budget exceeded: {0}")]
    Resource(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("context mismatch: {0}")]
    ContextMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("kernel validation failed: {0}")]
    Validation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        Error::Syntax {
            pos,
            msg: msg.into(),
        }
    }
}
