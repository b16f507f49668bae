use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("field mismatch: p = {left} vs p = {right}")]
    FieldMismatch { left: u32, right: u32 },

    #[error("group parameter mismatch: expected (p = {p}, n = {n}), {detail}")]
    ParameterMismatch { p: u32, n: usize, detail: String },

    #[error("{what}: {required} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, required: u128, cap: u128 },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
