use alloc::string::String;

use crate::BigCount;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by every layer of the crate.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("arity mismatch for `{symbol}`: expected {expected}, found {found}")]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("enumeration budget of {budget} exceeded: {required} candidate assignments required")]
    Budget { budget: u64, required: BigCount },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("structural error at element {element}: {message}")]
    Structural { element: usize, message: String },
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    pub(crate) fn structural(element: usize, msg: impl Into<String>) -> Self {
        Error::Structural {
            element,
            message: msg.into(),
        }
    }
}
