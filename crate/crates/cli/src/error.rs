use thiserror::Error;

/// Failures surfaced to the command line, each with its own exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    /// A config field failed validation; `field` is its dotted path.
    #[error("config error: `{field}`: {detail}")]
    Field { field: String, detail: String },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn field(field: impl Into<String>, detail: impl Into<String>) -> Self {
        CliError::Field { field: field.into(), detail: detail.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Output(_) => 1,
            CliError::Config(_) | CliError::Field { .. } => 3,
            CliError::Validation(_) => 4,
            CliError::Numerical(_) => 5,
        }
    }

    /// Map a core error raised while evaluating (not parsing) to a CLI error.
    pub fn from_eval(e: cogfso_core::Error) -> Self {
        match e {
            cogfso_core::Error::InvalidParameter { field, detail } => CliError::field(field, detail),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
