use willmore_core::Error as CoreError;

/// Failures of a lab command, each with its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("{0}")]
    Inadmissible(CoreError),

    #[error("{failed} of {total} checks failed")]
    ChecksFailed { failed: usize, total: usize },

    #[error("numerical failure: {0}")]
    Numerical(#[from] CoreError),

    #[error("all {0} sweep rows failed")]
    StudyFailed(usize),

    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

impl LabError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::ChecksFailed { .. } => 1,
            LabError::Config(_) | LabError::Inadmissible(_) => 2,
            LabError::Numerical(_) | LabError::StudyFailed(_) | LabError::Output(_) => 3,
        }
    }

    /// Routes admissibility refusals to the configuration class.
    pub fn from_core(e: CoreError) -> Self {
        match e {
            CoreError::Inadmissible { .. } | CoreError::NotPositiveDefinite { .. } => LabError::Inadmissible(e),
            other => LabError::Numerical(other),
        }
    }
}
