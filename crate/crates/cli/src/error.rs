//! Failure kinds and their process exit codes.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    /// Unknown flags or an invalid flag combination.
    Usage,
    /// An input file is missing or malformed.
    Input,
    /// Parameters outside the supported domain.
    Domain,
    /// A search limit or enumeration budget was exceeded.
    Budget,
    /// A code failed one of its defining checks.
    Verification,
    /// Reproduction results differ from the recorded expectations.
    Mismatch,
    /// An output could not be written.
    Io,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Usage => 2,
            ErrorKind::Input => 3,
            ErrorKind::Domain => 4,
            ErrorKind::Budget => 5,
            ErrorKind::Verification => 6,
            ErrorKind::Mismatch => 7,
            ErrorKind::Io => 8,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CliError {
    pub kind: ErrorKind,
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        Self {
            kind,
            code: kind.exit_code(),
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Usage, message)
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Input, message)
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Io, message)
    }

    /// The JSON object written to stderr.
    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<uwstbc::Error> for CliError {
    fn from(e: uwstbc::Error) -> Self {
        use uwstbc::Error::*;
        let kind = match &e {
            Shape(_) | Parse(_) => ErrorKind::Input,
            Domain(_) => ErrorKind::Domain,
            Budget(_) => ErrorKind::Budget,
            Verification { .. } => ErrorKind::Verification,
        };
        CliError::new(kind, e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
