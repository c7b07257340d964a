use bellkit_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum BellkitError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T, E = BellkitError> = std::result::Result<T, E>;

impl BellkitError {
    /// Process exit code: 1 usage, 2 budget exceeded, 3 internal consistency.
    pub fn exit_code(&self) -> i32 {
        match self {
            BellkitError::Core(CoreError::BudgetExceeded { .. }) => 2,
            BellkitError::Core(
                CoreError::Construction { .. } | CoreError::ImaginaryResidue(_),
            )
            | BellkitError::Verification(_) => 3,
            _ => 1,
        }
    }
}
