use alloc::string::String;

/// Errors raised by the estimators, builders and bound evaluators.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid design: {0}")]
    InvalidDesign(String),
    #[error("design is not orthonormal (max Gram deviation {0:e})")]
    NotOrthonormal(f64),
    #[error("invalid model collection: {0}")]
    InvalidCollection(String),
    #[error("empty model collection")]
    EmptyCollection,
    #[error("degenerate residual: observation lies in the largest model")]
    DegenerateResidual,
    #[error("enumeration would produce {count} models (limit {limit})")]
    EnumerationLimit { count: u128, limit: u128 },
    #[error("condition violated: {0}")]
    ConditionViolated(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
