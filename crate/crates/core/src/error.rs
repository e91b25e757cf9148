use std::fmt;

use serde::Serialize;

/// Errors raised by constructors and operations with preconditions.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parts sum to {sum}, expected {r}")]
    PartsSum { r: usize, sum: usize },
    #[error("inexact polynomial division: ({num}) / ({den})")]
    InexactDivision { num: String, den: String },
    #[error("truncation mismatch: {0} vs {1}")]
    TruncMismatch(usize, usize),
    #[error("q-degree {found} exceeds the bound {bound}")]
    QDegree { found: usize, bound: usize },
    #[error("series is not symmetric: M{0} and M{1} differ")]
    NotSymmetric(String, String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscrepancyKind {
    /// Two sides differ at some key.
    Value,
    /// An exact division left a remainder.
    Remainder,
    /// A structural property failed (predicate, positivity, roundtrip).
    Property,
    /// The check itself could not run.
    Internal,
}

/// First counterexample found by a verification routine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub kind: DiscrepancyKind,
    pub context: String,
    pub key: String,
    pub left: String,
    pub right: String,
}

impl Discrepancy {
    pub fn value(context: impl Into<String>, key: impl Into<String>, left: &dyn fmt::Display, right: &dyn fmt::Display) -> Self {
        Discrepancy {
            kind: DiscrepancyKind::Value,
            context: context.into(),
            key: key.into(),
            left: left.to_string(),
            right: right.to_string(),
        }
    }

    pub fn property(context: impl Into<String>, detail: impl Into<String>) -> Self {
        Discrepancy {
            kind: DiscrepancyKind::Property,
            context: context.into(),
            key: String::new(),
            left: detail.into(),
            right: String::new(),
        }
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Discrepancy {
            kind: DiscrepancyKind::Internal,
            context: msg.into(),
            key: String::new(),
            left: String::new(),
            right: String::new(),
        }
    }

    pub fn with_context(mut self, outer: &str) -> Self {
        self.context = format!("{outer}: {}", self.context);
        self
    }
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}] {}", self.kind, self.context)?;
        if !self.key.is_empty() {
            write!(f, " at {}", self.key)?;
        }
        if !self.left.is_empty() || !self.right.is_empty() {
            write!(f, ": {} vs {}", self.left, self.right)?;
        }
        Ok(())
    }
}

impl std::error::Error for Discrepancy {}

pub type Check = Result<(), Discrepancy>;
