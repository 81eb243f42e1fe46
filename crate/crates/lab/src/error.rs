#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("near-singular: {0}")]
    NearSingular(String),
    #[error(transparent)]
    Core(#[from] gapcert_core::Error),
}

pub type Result<T> = std::result::Result<T, LabError>;
