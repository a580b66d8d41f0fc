use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("group of order {order} exceeds the enumeration bound {bound}")]
    ResourceLimit { order: u64, bound: u64 },

    /// The bilinear form has a nontrivial radical where a metric group is required.
    #[error("degenerate quadratic form: {0}")]
    Degenerate(String),

    #[error("Gauss sum vanishes")]
    DegenerateSum,

    #[error("modular data check failed: {0}")]
    ModularityFailure(String),

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
