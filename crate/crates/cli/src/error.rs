use thiserror::Error;

/// Failures surfaced by the command line, each with a fixed exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ptdeco::Error),
    #[error("at {at}: {source}")]
    Located { at: String, source: ptdeco::Error },
    #[error("oracle validation failed: {0}")]
    OracleFailed(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_QUADRATURE: i32 = 3;
pub const EXIT_ORACLE: i32 = 4;

fn core_code(e: &ptdeco::Error) -> i32 {
    use ptdeco::Error::*;
    match e {
        QuadratureNotConverged { .. } | QuadratureMeshTooLarge { .. } => EXIT_QUADRATURE,
        BudgetExceeded { .. } | MetricOverflow { .. } => EXIT_ORACLE,
        InvalidParameter { .. } | InvalidState(_) | BathFile(_) => EXIT_USAGE,
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Core(e) | CliError::Located { source: e, .. } => core_code(e),
            CliError::OracleFailed(_) => EXIT_ORACLE,
        }
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
