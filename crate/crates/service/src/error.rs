use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use srs_core::format::LoadError;
use srs_core::wire::ApiErrorBody;
use srs_core::ModelError;

/// Error response: a status from {400, 404, 409, 500} and a JSON body
/// `{code, message}` whose code comes from the model, parse or request
/// code tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: String,
    pub message: String,
}

/// Request-level codes used when no model or parse code applies.
pub const E_JSON: &str = "E-JSON";
pub const E_QUERY: &str = "E-QUERY";
pub const E_ROUTE: &str = "E-ROUTE";
pub const E_IO: &str = "E-IO";

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        Self {
            status,
            code: code.to_string(),
            message: message.into(),
        }
    }

    pub fn bad_request(code: &str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, code, message)
    }
}

impl From<ModelError> for ApiError {
    fn from(e: ModelError) -> Self {
        let status = if e.is_not_found() {
            StatusCode::NOT_FOUND
        } else if e.is_conflict() {
            StatusCode::CONFLICT
        } else {
            StatusCode::BAD_REQUEST
        };
        Self::new(status, e.code(), e.to_string())
    }
}

/// The project file itself is broken or unreadable: a server-side problem.
impl From<LoadError> for ApiError {
    fn from(e: LoadError) -> Self {
        let code = match &e {
            LoadError::Io { .. } => E_IO,
            LoadError::Parse { diagnostics, .. } => diagnostics[0].code,
        };
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, code, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ApiErrorBody {
            code: self.code,
            message: self.message,
        };
        (self.status, Json(body)).into_response()
    }
}
