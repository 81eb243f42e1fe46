use gapcert_core::Error as CoreError;
use gapcert_lab::LabError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Param(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<LabError> for CliError {
    fn from(e: LabError) -> Self {
        match e {
            LabError::InvalidParameter(m) => CliError::Param(m),
            LabError::NumericalFailure(m) | LabError::NearSingular(m) => CliError::Numerical(m),
            LabError::Core(CoreError::InvalidParameter(m)) => CliError::Param(m),
            LabError::Core(other) => CliError::Param(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn param(msg: impl Into<String>) -> CliError {
    CliError::Param(msg.into())
}
