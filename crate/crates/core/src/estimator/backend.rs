use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Capabilities {
    pub supports_temperature: bool,
    /// Whether identical requests at temperature 0 return identical text.
    pub deterministic_at_zero: bool,
}

/// One chat-completion call. `repetition` and `attempt` are never sent over
/// the wire; they let offline backends key their randomness to the trial.
#[derive(Debug, Clone, PartialEq)]
pub struct ChatRequest {
    pub model: String,
    pub temperature: f64,
    pub system: String,
    pub user: String,
    pub repetition: usize,
    pub attempt: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BackendError {
    #[error("transport error: {0}")]
    Transport(String),
    #[error("backend rejected request: {0}")]
    Fatal(String),
    #[error("protocol violation: {0}")]
    ProtocolViolation(String),
}

impl BackendError {
    pub fn is_retryable(&self) -> bool {
        matches!(self, BackendError::Transport(_))
    }
}

/// A chat-completion service. Implementations must tolerate concurrent
/// calls.
pub trait RatingBackend: Send + Sync {
    fn capabilities(&self) -> Capabilities;
    fn complete(&self, request: &ChatRequest) -> Result<String, BackendError>;
}
