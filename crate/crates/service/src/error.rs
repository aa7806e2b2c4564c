use ahp_core::{Diagnostic, EvalError};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::{Deserialize, Serialize};

use crate::store::StoreError;

/// A rating cell the model still needs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissingRating {
    pub alternative: String,
    /// `None` when the whole sheet is missing.
    pub leaf: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorBody {
    pub error: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<Diagnostic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub current_revision: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub unjudged_nodes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub missing_ratings: Vec<MissingRating>,
}

#[derive(Debug, Clone)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: Box<ErrorBody>,
}

impl ApiError {
    pub fn new(status: StatusCode, error: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            body: Box::new(ErrorBody {
                error,
                message: message.into(),
                details: Vec::new(),
                current_revision: None,
                unjudged_nodes: Vec::new(),
                missing_ratings: Vec::new(),
            }),
        }
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "not_found", message)
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "malformed_body", message)
    }

    pub fn unprocessable(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid", message)
    }

    pub fn invalid_model(details: Vec<Diagnostic>) -> Self {
        let message = match details.first() {
            Some(d) if details.len() == 1 => d.to_string(),
            Some(d) => format!("{d} (and {} more)", details.len() - 1),
            None => "invalid model".to_string(),
        };
        let mut e = ApiError::unprocessable(message);
        e.body.details = details;
        e
    }

    pub fn internal(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::NotFound(_) => ApiError::not_found(e.to_string()),
            StoreError::Conflict { current, .. } => {
                let mut err = ApiError::new(StatusCode::CONFLICT, "revision_conflict", e.to_string());
                err.body.current_revision = Some(current);
                err
            }
            StoreError::Corrupt { .. } | StoreError::Io(_) => ApiError::internal(e.to_string()),
        }
    }
}

impl From<EvalError> for ApiError {
    fn from(e: EvalError) -> Self {
        ApiError::unprocessable(e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(*self.body)).into_response()
    }
}
