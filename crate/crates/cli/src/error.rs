//! Error records emitted on stderr.

use serde::Serialize;

/// A failure with a machine-readable kind and, when known, the parameter at fault.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub parameter: Option<String>,
}

impl CliError {
    pub fn config(message: impl Into<String>, parameter: Option<&str>) -> Self {
        CliError { kind: "ConfigError".into(), message: message.into(), parameter: parameter.map(Into::into) }
    }

    pub fn io(message: impl Into<String>, parameter: Option<&str>) -> Self {
        CliError { kind: "IoError".into(), message: message.into(), parameter: parameter.map(Into::into) }
    }

    pub fn compute(e: lmgc_core::Error, parameter: Option<&str>) -> Self {
        CliError { kind: e.kind().into(), message: e.to_string(), parameter: parameter.map(Into::into) }
    }

    /// Process exit status: 2 for configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        if self.kind == "ConfigError" {
            2
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)?;
        if let Some(p) = &self.parameter {
            write!(f, " (parameter {p})")?;
        }
        Ok(())
    }
}

impl std::error::Error for CliError {}

/// Attaches the offending parameter to a core error.
pub trait At<T> {
    fn at(self, parameter: &str) -> Result<T, CliError>;
}

impl<T> At<T> for Result<T, lmgc_core::Error> {
    fn at(self, parameter: &str) -> Result<T, CliError> {
        self.map_err(|e| CliError::compute(e, Some(parameter)))
    }
}
