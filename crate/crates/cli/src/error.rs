use std::path::Path;

use serde::Serialize;

/// Failure categories and their process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorKind {
    Usage,
    Numeric,
    Io,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Usage => 1,
            ErrorKind::Numeric => 2,
            ErrorKind::Io => 3,
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Usage,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        Self {
            kind: ErrorKind::Io,
            message: format!("{}: {err}", path.display()),
        }
    }

    /// The single JSON line written to stderr.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Line<'a> {
            error: ErrorKind,
            exit_code: i32,
            message: &'a str,
        }
        serde_json::to_string(&Line {
            error: self.kind,
            exit_code: self.kind.exit_code(),
            message: &self.message,
        })
        .expect("error line serializes")
    }
}

impl From<molvqe::Error> for CliError {
    fn from(e: molvqe::Error) -> Self {
        let kind = if e.is_numeric_failure() || matches!(e, molvqe::Error::TimeLimit) {
            ErrorKind::Numeric
        } else {
            ErrorKind::Usage
        };
        Self {
            kind,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
