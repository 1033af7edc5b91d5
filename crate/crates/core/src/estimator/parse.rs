use std::sync::LazyLock;

use regex::Regex;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("no numeric token in response")]
    NoNumber,
    #[error("rating {0} outside [0, 1]")]
    OutOfRange(f64),
}

static NUMBER: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"[-+]?(?:\d+(?:\.\d+)?|\.\d+)").unwrap());

/// Read the first decimal number in `raw`. Values outside [0, 1] are
/// rejected rather than clamped.
pub fn parse_rating(raw: &str) -> Result<f64, ParseError> {
    let token = NUMBER.find(raw).ok_or(ParseError::NoNumber)?;
    let v: f64 = token.as_str().parse().map_err(|_| ParseError::NoNumber)?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(ParseError::OutOfRange(v))
    }
}
