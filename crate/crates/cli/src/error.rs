use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] collisim::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for configuration problems, 3 for size caps, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(collisim::Error::CapExceeded { .. }) => 3,
            _ => 1,
        }
    }

    /// Errors raised while building states and observables from the config
    /// are configuration errors unless they are cap violations.
    pub fn from_setup(e: collisim::Error) -> Self {
        match e {
            collisim::Error::CapExceeded { .. } => CliError::Core(e),
            other => CliError::Config(other.to_string()),
        }
    }
}
