use serde::Deserialize;

use super::RegressionError;

/// Published per-concept regression weights, verbatim. In the printed table
/// the sin(H), cos(2H) and sin(2H) columns hold the same value on every
/// row, so only `l`, `c`, `cos_h` and `k` are trustworthy.
pub const PUBLISHED_WEIGHTS_CSV: &str = include_str!("../../data/published_weights.csv");

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct PublishedWeights {
    pub concept: String,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub cos_h: f64,
    pub sin_h: f64,
    pub cos_2h: f64,
    pub sin_2h: f64,
    pub k: f64,
}

pub fn load_published_weights() -> Result<Vec<PublishedWeights>, RegressionError> {
    let rows = csv::Reader::from_reader(PUBLISHED_WEIGHTS_CSV.as_bytes())
        .deserialize()
        .collect::<Result<Vec<PublishedWeights>, _>>()?;
    if rows.len() != 70 {
        return Err(RegressionError::Fixture(format!(
            "{} rows, expected 70",
            rows.len()
        )));
    }
    Ok(rows)
}
