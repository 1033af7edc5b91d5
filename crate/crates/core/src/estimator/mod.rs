//! Prompting protocols, chat backends and aggregation of numeric ratings
//! into association distributions.

mod backend;
mod estimate;
#[cfg(feature = "http")]
mod http;
pub mod mock;
mod parse;
mod prompt;
mod protocol;
mod record;
mod retry;

pub use backend::{BackendError, Capabilities, ChatRequest, RatingBackend};
pub use estimate::{
    Clock, Estimate, Estimator, FixedClock, RecordSink, SystemClock, DEFAULT_CONCURRENCY,
};
#[cfg(feature = "http")]
pub use http::{HttpBackend, API_KEY_VAR, API_URL_VAR, DEFAULT_API_URL};
pub use mock::{GroundTruth, MockBackend};
pub use parse::{parse_rating, ParseError};
pub use prompt::{
    build_prompt, parse_trial_prompt, Prompt, ANSWER_LINE, SYSTEM_PROMPT, TASK_DESCRIPTION,
    TRIAL_START,
};
pub use protocol::{ProtocolName, RatingProtocol};
pub use record::{values_by_color, AssociationDistribution, RatingKey, RatingRecord};
pub use retry::{RateLimiter, RetryPolicy};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EstimatorError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("concept {concept:?}: no successful rating for colors {color_indices:?}")]
    Incomplete {
        concept: String,
        color_indices: Vec<usize>,
    },
    #[error("concept {concept:?}: backend failure: {message}")]
    Backend { concept: String, message: String },
    #[error("failed to persist records: {0}")]
    Sink(String),
}
