use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("variable x{index} out of range 1..={n}")]
    VariableOutOfRange { index: usize, n: usize },

    #[error("{n} variables exceeds the limit of {limit}")]
    SizeExceeded { n: usize, limit: usize },

    #[error("variable count must be at least 1")]
    NoVariables,

    #[error("malformed truth table: {0}")]
    MalformedTable(String),

    #[error("trial count must be at least 1")]
    NoTrials,

    #[error("weight threshold k = {k} exceeds n = {n}")]
    ThresholdOutOfRange { k: usize, n: usize },

    #[error("unamplifiable: no outcome with {k} or more ones has nonzero probability")]
    Unamplifiable { k: usize },

    #[error("value {value} outside the domain {domain}")]
    Domain { value: f64, domain: &'static str },
}

impl Error {
    /// True for errors caused by the computation's domain rather than by malformed input.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::SizeExceeded { .. } | Error::Unamplifiable { .. } | Error::Domain { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
