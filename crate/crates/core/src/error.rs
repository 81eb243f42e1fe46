use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed input: negative constants, empty intervals, mismatched lengths.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// The hypotheses of the requested enclosure do not hold for these inputs.
    /// This is a domain answer, not a failure.
    #[error("condition not applicable: {0}")]
    NotApplicable(String),
    /// A resolvent estimate was requested at a point where it does not hold.
    #[error("bound not valid: {0}")]
    BoundNotValid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn not_applicable(msg: impl Into<String>) -> Error {
    Error::NotApplicable(msg.into())
}
