use std::fmt;

/// `Input` covers unreadable or malformed files and bad flags (exit 2);
/// `Domain` covers validation failures and mathematical refusals (exit 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Input(String),
    Domain(String),
    /// A report was produced and shows a failure: the report goes to
    /// standard output, the reason to standard error (exit 1).
    Failed { report: String, reason: String },
}

impl CliError {
    pub fn failed(report: impl Into<String>, reason: &str) -> Self {
        CliError::Failed {
            report: report.into(),
            reason: reason.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Domain(_) | CliError::Failed { .. } => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Domain(m) => write!(f, "error: {m}"),
            CliError::Failed { reason, .. } => write!(f, "error: {reason}"),
        }
    }
}

impl std::error::Error for CliError {}
