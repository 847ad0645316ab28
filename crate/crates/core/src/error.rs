use thiserror::Error;

use crate::graph::Hypothesis;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A hypothesis of the Euler characteristic formula does not hold.
    #[error("hypothesis violated: {0}")]
    Hypothesis(Hypothesis),

    /// The requested computation exceeds a configured size budget.
    #[error("{what} requires {required} but the budget is {budget}")]
    Resource {
        what: &'static str,
        required: u128,
        budget: u128,
    },

    #[error("invalid state: {0}")]
    State(String),

    /// The input is not a chain complex, or two independent computations disagree.
    #[error("integrity check failed: {0}")]
    Integrity(String),

    #[error("malformed graph description: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
