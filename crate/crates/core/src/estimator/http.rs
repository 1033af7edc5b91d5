use std::time::Duration;

use serde_json::{json, Value};

use super::backend::{BackendError, Capabilities, ChatRequest, RatingBackend};
use super::EstimatorError;

pub const API_URL_VAR: &str = "CHROMA_ASSOC_API_URL";
pub const API_KEY_VAR: &str = "CHROMA_ASSOC_API_KEY";
pub const DEFAULT_API_URL: &str = "https://api.openai.com/v1/chat/completions";

/// OpenAI-compatible chat-completion endpoint.
pub struct HttpBackend {
    client: reqwest::blocking::Client,
    url: String,
    api_key: String,
}

impl HttpBackend {
    pub fn new(url: impl Into<String>, api_key: impl Into<String>) -> Result<Self, EstimatorError> {
        let api_key = api_key.into();
        if api_key.trim().is_empty() {
            return Err(EstimatorError::Config("API key is empty".into()));
        }
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(120))
            .build()
            .map_err(|e| EstimatorError::Config(e.to_string()))?;
        Ok(HttpBackend {
            client,
            url: url.into(),
            api_key,
        })
    }

    /// Reads the endpoint and key from the environment. The URL falls back to
    /// [`DEFAULT_API_URL`]; the key is mandatory.
    pub fn from_env() -> Result<Self, EstimatorError> {
        let key = std::env::var(API_KEY_VAR)
            .map_err(|_| EstimatorError::Config(format!("{API_KEY_VAR} is not set")))?;
        let url = std::env::var(API_URL_VAR).unwrap_or_else(|_| DEFAULT_API_URL.to_string());
        Self::new(url, key)
    }
}

impl RatingBackend for HttpBackend {
    fn capabilities(&self) -> Capabilities {
        Capabilities {
            supports_temperature: true,
            deterministic_at_zero: false,
        }
    }

    fn complete(&self, req: &ChatRequest) -> Result<String, BackendError> {
        let body = json!({
            "model": req.model,
            "temperature": req.temperature,
            "messages": [
                {"role": "system", "content": req.system},
                {"role": "user", "content": req.user},
            ],
        });
        let resp = self
            .client
            .post(&self.url)
            .bearer_auth(&self.api_key)
            .json(&body)
            .send()
            .map_err(|e| BackendError::Transport(e.to_string()))?;
        let status = resp.status();
        if status.as_u16() == 429 || status.is_server_error() {
            return Err(BackendError::Transport(format!("HTTP {status}")));
        }
        if !status.is_success() {
            let text = resp.text().unwrap_or_default();
            return Err(BackendError::Fatal(format!("HTTP {status}: {text}")));
        }
        let v: Value = resp
            .json()
            .map_err(|e| BackendError::Transport(format!("invalid JSON: {e}")))?;
        v.pointer("/choices/0/message/content")
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| {
                BackendError::ProtocolViolation("response lacks choices[0].message.content".into())
            })
    }
}
