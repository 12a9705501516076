use thiserror::Error;

/// Failures of a CLI run, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("undefined threshold: {0}")]
    Undefined(String),
    #[error("verification failed: {0}")]
    VerifyFailed(String),
    #[error("numeric failure: {0}")]
    Numeric(#[from] maxsat_core::Error),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::NonConvergence(_) => 3,
            CliError::Undefined(_) => 4,
            CliError::VerifyFailed(_) | CliError::Numeric(_) | CliError::Io(_) => 1,
        }
    }
}
