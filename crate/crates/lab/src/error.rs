use closure_lab_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("search budget exhausted after {nodes} nodes without certifying the optimum")]
    Budget { nodes: u64 },
}

impl LabError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        LabError::Parse {
            line,
            message: message.into(),
        }
    }

    /// 2 for bad input or failed validation, 3 for an exhausted budget,
    /// 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Parse { .. } | LabError::Usage(_) | LabError::Io { .. } => 2,
            LabError::Budget { .. } => 3,
            LabError::Core(CoreError::BudgetExceeded { .. }) => 3,
            LabError::Core(CoreError::Lp(_)) => 1,
            LabError::Core(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            LabError::Parse { .. } => "parse",
            LabError::Usage(_) => "usage",
            LabError::Io { .. } => "io",
            LabError::Budget { .. } => "budget",
            LabError::Core(CoreError::BudgetExceeded { .. }) => "budget",
            LabError::Core(CoreError::NotClosure { .. }) => "validation",
            LabError::Core(_) => "core",
        }
    }
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
