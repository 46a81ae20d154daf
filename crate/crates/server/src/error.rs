use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde_json::json;

/// Error returned by every handler, rendered as `{"error", "message"}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self {
            status,
            code,
            message: message.into(),
        }
    }

    pub fn bad_boundary(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "BadBoundary", message)
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "BadRequest", message)
    }

    pub fn session_not_found(id: &str) -> Self {
        Self::new(
            StatusCode::NOT_FOUND,
            "SessionNotFound",
            format!("no session {id}"),
        )
    }

    pub fn unknown_instance(id: u32) -> Self {
        Self::new(
            StatusCode::NOT_FOUND,
            "UnknownInstance",
            format!("no furniture {id}"),
        )
    }

    pub fn out_of_boundary(message: impl Into<String>) -> Self {
        Self::new(StatusCode::CONFLICT, "OutOfBoundary", message)
    }

    pub fn no_connectivity(message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, "NoConnectivity", message)
    }

    pub fn missing_activity() -> Self {
        Self::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "MissingActivity",
            "synthesize an activity map first",
        )
    }

    pub fn index_not_loaded() -> Self {
        Self::new(
            StatusCode::SERVICE_UNAVAILABLE,
            "IndexNotLoaded",
            "no dataset index is loaded",
        )
    }

    pub fn generator_failure(message: impl Into<String>) -> Self {
        Self::new(
            StatusCode::INTERNAL_SERVER_ERROR,
            "GeneratorFailure",
            message,
        )
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = Json(json!({ "error": self.code, "message": self.message }));
        (self.status, body).into_response()
    }
}
