use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::prompt::SYSTEM_PROMPT;
use super::EstimatorError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolName {
    SingleDeterministic,
    AnchoredDeterministic,
    StochasticAveraged,
}

impl ProtocolName {
    pub const ALL: [ProtocolName; 3] = [
        ProtocolName::SingleDeterministic,
        ProtocolName::AnchoredDeterministic,
        ProtocolName::StochasticAveraged,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProtocolName::SingleDeterministic => "single_deterministic",
            ProtocolName::AnchoredDeterministic => "anchored_deterministic",
            ProtocolName::StochasticAveraged => "stochastic_averaged",
        }
    }

    pub fn is_deterministic(self) -> bool {
        self != ProtocolName::StochasticAveraged
    }
}

impl fmt::Display for ProtocolName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProtocolName {
    type Err = EstimatorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProtocolName::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| EstimatorError::InvalidProtocol(format!("unknown protocol {s:?}")))
    }
}

/// How ratings are elicited: sampling temperature, repetitions per
/// color-concept pair and whether the anchoring preamble is included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatingProtocol {
    pub name: ProtocolName,
    pub temperature: f64,
    pub repetitions: usize,
    pub anchoring: bool,
    pub system_prompt: String,
    pub model_id: String,
}

impl RatingProtocol {
    pub fn new(name: ProtocolName, model_id: impl Into<String>) -> Self {
        let (temperature, repetitions, anchoring) = match name {
            ProtocolName::SingleDeterministic => (0.0, 1, false),
            ProtocolName::AnchoredDeterministic => (0.0, 1, true),
            ProtocolName::StochasticAveraged => (1.0, 10, false),
        };
        RatingProtocol {
            name,
            temperature,
            repetitions,
            anchoring,
            system_prompt: SYSTEM_PROMPT.to_string(),
            model_id: model_id.into(),
        }
    }

    pub fn single_deterministic(model_id: impl Into<String>) -> Self {
        Self::new(ProtocolName::SingleDeterministic, model_id)
    }

    pub fn anchored_deterministic(model_id: impl Into<String>) -> Self {
        Self::new(ProtocolName::AnchoredDeterministic, model_id)
    }

    pub fn stochastic_averaged(model_id: impl Into<String>) -> Self {
        Self::new(ProtocolName::StochasticAveraged, model_id)
    }

    /// Apply temperature / repetition overrides. Only the stochastic protocol
    /// accepts values other than its defaults.
    pub fn with_overrides(
        mut self,
        temperature: Option<f64>,
        repetitions: Option<usize>,
    ) -> Result<Self, EstimatorError> {
        if let Some(t) = temperature {
            self.temperature = t;
        }
        if let Some(r) = repetitions {
            self.repetitions = r;
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), EstimatorError> {
        let bad = |msg: String| Err(EstimatorError::InvalidProtocol(msg));
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return bad(format!(
                "temperature {} must be finite and >= 0",
                self.temperature
            ));
        }
        if self.repetitions == 0 {
            return bad("repetitions must be positive".into());
        }
        if self.model_id.trim().is_empty() {
            return bad("model id must not be empty".into());
        }
        let anchored = self.name == ProtocolName::AnchoredDeterministic;
        if self.anchoring != anchored {
            return bad(format!("{} requires anchoring={anchored}", self.name));
        }
        if self.name.is_deterministic() && (self.temperature != 0.0 || self.repetitions != 1) {
            return bad(format!(
                "{} is fixed at temperature 0 with 1 repetition",
                self.name
            ));
        }
        Ok(())
    }
}
