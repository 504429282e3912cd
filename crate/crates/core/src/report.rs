//! Structured evidence for membership and structural checks.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IssueCode {
    WidthMismatch,
    NotSquareBase,
    NotLaminar,
    EmptyForm,
    Norm,
    Orthogonality,
    PivotPhase,
    SupportViolation,
    FactorResidual,
    MinOrder,
}

impl IssueCode {
    pub fn as_str(self) -> &'static str {
        match self {
            IssueCode::WidthMismatch => "WIDTH_MISMATCH",
            IssueCode::NotSquareBase => "NOT_SQUARE_BASE",
            IssueCode::NotLaminar => "NOT_LAMINAR",
            IssueCode::EmptyForm => "EMPTY_FORM",
            IssueCode::Norm => "NORM",
            IssueCode::Orthogonality => "ORTHOGONALITY",
            IssueCode::PivotPhase => "PIVOT_PHASE",
            IssueCode::SupportViolation => "SUPPORT_VIOLATION",
            IssueCode::FactorResidual => "FACTOR_RESIDUAL",
            IssueCode::MinOrder => "MIN_ORDER",
        }
    }
}

impl fmt::Display for IssueCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One failed check. `location` is a path into the expression tree such as
/// `root.block[1].base`; `rows` are 0-based row indices of the checked matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationIssue {
    pub code: IssueCode,
    pub location: String,
    pub rows: Vec<usize>,
    pub magnitude: f64,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl ValidationIssue {
    pub fn new(code: IssueCode, location: impl Into<String>, rows: Vec<usize>, magnitude: f64) -> Self {
        ValidationIssue {
            code,
            location: location.into(),
            rows,
            magnitude: magnitude.abs(),
            detail: String::new(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.code, self.location)?;
        if !self.rows.is_empty() {
            write!(f, " rows {:?}", self.rows)?;
        }
        if self.magnitude > 0.0 {
            write!(f, " (magnitude {:.3e})", self.magnitude)?;
        }
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn from_issues(issues: Vec<ValidationIssue>) -> Self {
        ValidationReport {
            passed: issues.is_empty(),
            issues,
        }
    }

    pub fn has(&self, code: IssueCode) -> bool {
        self.issues.iter().any(|i| i.code == code)
    }

    pub fn first(&self, code: IssueCode) -> Option<&ValidationIssue> {
        self.issues.iter().find(|i| i.code == code)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            return f.write_str("pass");
        }
        write!(f, "{} issue(s)", self.issues.len())?;
        for issue in &self.issues {
            write!(f, "; {issue}")?;
        }
        Ok(())
    }
}
