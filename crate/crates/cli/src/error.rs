use thiserror::Error;
use weno_core::{AnalysisError, KernelError, ProblemError, SolverError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 1 for numerical or output failures, 2 for configuration errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            _ => 1,
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Controls(m) => Self::Config(m),
            SolverError::Kernel(k) => Self::Config(k.to_string()),
            SolverError::Grid(g) => Self::Config(g.to_string()),
            other => Self::Numerical(other.to_string()),
        }
    }
}

impl From<KernelError> for CliError {
    fn from(e: KernelError) -> Self {
        Self::Config(e.to_string())
    }
}

impl From<ProblemError> for CliError {
    fn from(e: ProblemError) -> Self {
        match e {
            ProblemError::Solver(s) => s.into(),
            ProblemError::Physics(p) => Self::Numerical(p.to_string()),
            other => Self::Config(other.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Solver(s) => s.into(),
            AnalysisError::Problem(p) => p.into(),
            AnalysisError::Kernel(k) => k.into(),
            AnalysisError::Input(m) => Self::Config(m),
            AnalysisError::Grid(g) => Self::Config(g.to_string()),
        }
    }
}
