use mg_core::construction::ParseError;
use mg_core::reason::ReasonError;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("{path}: {message}")]
    File { path: String, message: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
    /// A statement, expression or object reference that does not fit the
    /// construction.
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Reason(#[from] ReasonError),
    #[error("unknown construction `{0}`")]
    UnknownSession(String),
    #[error("unknown job `{0}`")]
    UnknownJob(String),
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
    #[error("malformed request: {0}")]
    BadRequest(String),
}

impl ServiceError {
    pub fn kind(&self) -> &'static str {
        match self {
            ServiceError::File { .. } => "file",
            ServiceError::Parse(_) => "parse",
            ServiceError::Invalid(_) => "invalid",
            ServiceError::Reason(ReasonError::ResourceLimit(_)) => "resource_limit",
            ServiceError::Reason(_) => "reasoning",
            ServiceError::UnknownSession(_) | ServiceError::UnknownJob(_) | ServiceError::UnknownCommand(_) => "not_found",
            ServiceError::BadRequest(_) => "bad_request",
        }
    }

    pub fn http_status(&self) -> u16 {
        match self {
            ServiceError::File { .. } | ServiceError::Parse(_) | ServiceError::BadRequest(_) => 400,
            ServiceError::UnknownSession(_) | ServiceError::UnknownJob(_) | ServiceError::UnknownCommand(_) => 404,
            ServiceError::Reason(ReasonError::ResourceLimit(_)) => 503,
            ServiceError::Invalid(_) | ServiceError::Reason(_) => 422,
        }
    }

    /// 2 for resource limits, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            ServiceError::Reason(ReasonError::ResourceLimit(_)) => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut error = json!({ "kind": self.kind(), "message": self.to_string() });
        if let ServiceError::Parse(e) = self {
            error["line"] = json!(e.line);
            error["column"] = json!(e.column);
            error["phase"] = json!(e.kind.to_string());
        }
        json!({ "status": "error", "error": error })
    }
}
