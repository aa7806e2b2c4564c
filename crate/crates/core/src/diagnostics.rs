use std::fmt;

use serde::{Deserialize, Serialize};

/// Machine-readable category of a model problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticCode {
    NoCriteria,
    EmptyId,
    DuplicateId,
    MissingMatrix,
    DimensionMismatch,
    LabelMismatch,
    UnsupportedOrder,
    InvalidMatrix,
    NotReciprocal,
    NonPositive,
    OffScale,
    InvalidJudgments,
    InvalidThreshold,
    DuplicateAlternative,
    UnknownAlternative,
    MissingSheet,
    MissingRating,
    UnknownLeaf,
    RatingOutOfRange,
    UnknownTemplate,
}

impl DiagnosticCode {
    /// Codes that only mean "not finished yet"; a partially judged session
    /// model is allowed to carry these.
    pub fn is_incomplete(self) -> bool {
        matches!(
            self,
            DiagnosticCode::NoCriteria
                | DiagnosticCode::MissingMatrix
                | DiagnosticCode::MissingSheet
                | DiagnosticCode::MissingRating
        )
    }
}

/// One problem found while validating a model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    /// Node or alternative the problem is attached to, when there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    /// Dotted document path of the offending field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub message: String,
}

impl Diagnostic {
    pub fn new(code: DiagnosticCode, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            target: None,
            field: None,
            message: message.into(),
        }
    }

    pub fn at(mut self, target: impl Into<String>) -> Self {
        self.target = Some(target.into());
        self
    }

    pub fn field(mut self, field: impl Into<String>) -> Self {
        self.field = Some(field.into());
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.target, &self.field) {
            (_, Some(field)) => write!(f, "{field}: {}", self.message),
            (Some(t), None) => write!(f, "{t}: {}", self.message),
            (None, None) => f.write_str(&self.message),
        }
    }
}
