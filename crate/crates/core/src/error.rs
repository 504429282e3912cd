use thiserror::Error;

use crate::report::{IssueCode, ValidationIssue, ValidationReport};

/// Errors produced by the canonical-form library.
#[derive(Debug, Error)]
pub enum CfmError {
    #[error("field mismatch: {0} vs {1}")]
    TagMismatch(crate::scalar::Field, crate::scalar::Field),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("dimension mismatch: {0}")]
    Shape(String),

    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("invalid expression: {0}")]
    Structure(ValidationIssue),

    #[error("invalid preset: {0}")]
    Preset(String),

    #[error("membership check failed: {0}")]
    Membership(ValidationReport),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CfmError {
    pub(crate) fn structure(code: IssueCode, location: impl Into<String>, detail: impl Into<String>) -> Self {
        CfmError::Structure(ValidationIssue::new(code, location, Vec::new(), 0.0).with_detail(detail))
    }

    /// Issue code carried by structural errors, if any.
    pub fn issue_code(&self) -> Option<IssueCode> {
        match self {
            CfmError::Structure(issue) => Some(issue.code),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, CfmError>;
