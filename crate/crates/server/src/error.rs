use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use opendatasheets::error::{JsonError, ModelError, PolicyError};
use opendatasheets::model::to_canonical_json;
use opendatasheets::validation::Issue;
use serde::Serialize;

/// JSON error body. `status` is one of 400, 404, 413 or 500.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    pub status: u16,
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub issues: Option<Vec<Issue>>,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        Self {
            status: status.as_u16(),
            code: code.to_string(),
            message: message.into(),
            issues: None,
        }
    }

    pub fn bad_request(code: &str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, code, message)
    }

    pub fn not_found() -> Self {
        Self::new(StatusCode::NOT_FOUND, "not-found", "no such route")
    }

    pub fn too_large(message: impl Into<String>) -> Self {
        Self::new(StatusCode::PAYLOAD_TOO_LARGE, "payload-too-large", message)
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }
}

impl From<JsonError> for ApiError {
    fn from(e: JsonError) -> Self {
        Self {
            issues: Some(vec![Issue::from_json_error(&e)]),
            ..Self::bad_request(e.code(), e.to_string())
        }
    }
}

impl From<ModelError> for ApiError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Json(e) => e.into(),
            ModelError::InvalidSlug(_) => Self::bad_request("invalid-slug", e.to_string()),
            ModelError::DuplicateResource(_) => Self::bad_request("duplicate-resource", e.to_string()),
        }
    }
}

impl From<PolicyError> for ApiError {
    fn from(e: PolicyError) -> Self {
        let code = match &e {
            PolicyError::Json(j) => return j.clone().into(),
            PolicyError::UnknownCheck { .. } => "unknown-check",
            PolicyError::BadRegex { .. } => "bad-regex",
            PolicyError::BadPath { .. } => "bad-path",
            PolicyError::BadRuleId { .. } => "bad-rule-id",
            PolicyError::DuplicateRuleId(_) => "duplicate-rule-id",
        };
        Self::bad_request(code, e.to_string())
    }
}

pub fn json_response(status: StatusCode, body: String) -> Response {
    let mut response = (status, body).into_response();
    response
        .headers_mut()
        .insert(header::CONTENT_TYPE, HeaderValue::from_static("application/json; charset=utf-8"));
    response
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        json_response(status, to_canonical_json(&self))
    }
}
