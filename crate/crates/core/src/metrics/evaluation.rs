use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{critical_r, pearson, Result};
use crate::numfmt::{opt_sig6, sig6};

/// Family-wise alpha before Bonferroni correction.
pub const DEFAULT_ALPHA: f64 = 0.05;

pub fn bonferroni_alpha(alpha: f64, n_tests: usize) -> f64 {
    alpha / n_tests as f64
}

#[derive(Debug, Error)]
pub enum EvaluationError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Agreement between an estimated distribution and mean human ratings for
/// one concept, with the human ceiling and lexical covariates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConceptEvaluation {
    pub concept: String,
    pub pearson_r: f64,
    pub significant: bool,
    pub split_half_r: Option<f64>,
    pub specificity: Option<f64>,
    pub concreteness: Option<f64>,
}

impl ConceptEvaluation {
    /// `threshold` is the critical r the correlation must strictly exceed.
    pub fn new(concept: impl Into<String>, pearson_r: f64, threshold: f64) -> Self {
        ConceptEvaluation {
            concept: concept.into(),
            pearson_r,
            significant: pearson_r > threshold,
            split_half_r: None,
            specificity: None,
            concreteness: None,
        }
    }

    pub fn assess(
        concept: impl Into<String>,
        estimate: &[f64],
        human_means: &[f64],
        threshold: f64,
    ) -> Result<Self> {
        Ok(Self::new(
            concept,
            pearson(estimate, human_means)?,
            threshold,
        ))
    }
}

/// Bonferroni-corrected critical r for `n_concepts` correlations, each over
/// `n_colors` colors.
pub fn significance_threshold(alpha: f64, n_concepts: usize, n_colors: usize) -> Result<f64> {
    critical_r(
        bonferroni_alpha(alpha, n_concepts.max(1)),
        n_colors.saturating_sub(2),
    )
}

pub fn write_evaluations_csv<W: Write>(
    out: W,
    rows: &[ConceptEvaluation],
) -> std::result::Result<(), EvaluationError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "concept",
        "pearson_r",
        "significant",
        "split_half_r",
        "specificity",
        "concreteness",
    ])?;
    for e in rows {
        w.write_record([
            e.concept.clone(),
            sig6(e.pearson_r),
            e.significant.to_string(),
            opt_sig6(e.split_half_r),
            opt_sig6(e.specificity),
            opt_sig6(e.concreteness),
        ])?;
    }
    w.flush()?;
    Ok(())
}
