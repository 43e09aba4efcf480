use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no column standard form reachable after {visited} states")]
    Normalization { visited: usize },
    #[error("invalid recipe: {0}")]
    RecipeInvalid(String),
    #[error("structural violation: {0}")]
    Structural(String),
    #[error("not a linearization: {0}")]
    NotLinearization(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("pole at {re}+{im}i: {what}")]
    Pole { re: f64, im: f64, what: String },
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Schema(_) => 2,
            Error::RecipeInvalid(_) | Error::Precondition(_) => 3,
            Error::Structural(_) | Error::NotLinearization(_) | Error::InvalidInput(_) => 4,
            Error::Numeric(_) | Error::Pole { .. } | Error::Normalization { .. } => 5,
            Error::Consistency(_) | Error::CheckFailed(_) => 6,
        }
    }
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid-input",
            Error::Precondition(_) => "precondition",
            Error::Normalization { .. } => "normalization",
            Error::RecipeInvalid(_) => "recipe-invalid",
            Error::Structural(_) => "structural",
            Error::NotLinearization(_) => "not-linearization",
            Error::Numeric(_) => "numeric",
            Error::Pole { .. } => "pole",
            Error::Consistency(_) => "consistency",
            Error::Schema(_) => "schema",
            Error::CheckFailed(_) => "check-failed",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
