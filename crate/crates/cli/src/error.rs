use std::process::ExitCode;

use margin_mcmc::{ChainError, ExactError, FeasibilityError, MatrixError, StatsError};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Internal(_) => 4,
        })
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<MatrixError> for CliError {
    fn from(e: MatrixError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<FeasibilityError> for CliError {
    fn from(e: FeasibilityError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<ChainError> for CliError {
    fn from(e: ChainError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<ExactError> for CliError {
    fn from(e: ExactError) -> Self {
        match e {
            ExactError::Inconsistent { .. } => CliError::Internal(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        match e {
            StatsError::Feasibility(inner) => inner.into(),
            StatsError::Chain(inner) => inner.into(),
            StatsError::NonIncreasing { .. } => CliError::Internal(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}
