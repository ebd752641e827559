use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A constructed or loaded object failed one of its defining checks.
    #[error("verification failed ({condition}): {detail}")]
    Verification { condition: String, detail: String },

    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn verification(condition: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Verification {
            condition: condition.into(),
            detail: detail.into(),
        }
    }
}
