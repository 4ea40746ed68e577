use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed scenario or value encoding.
    #[error("schema error: {0}")]
    Schema(String),

    /// Ill-formed input object (unknown atom, negative weight, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// Two objects that must share a measure space do not.
    #[error("measure space mismatch: {0}")]
    SpaceMismatch(String),

    /// An operation was applied outside of its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A float computation would have produced NaN.
    #[error("arithmetic error: {0}")]
    Arithmetic(String),

    #[error("enumeration budget exceeded: {needed} > {budget}")]
    Budget { needed: u128, budget: u128 },

    /// A hypothesis required before evaluation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// An identity that must hold by construction was observed to fail.
    #[error("library invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn schema(msg: impl Into<String>) -> Self {
        Error::Schema(msg.into())
    }

    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
