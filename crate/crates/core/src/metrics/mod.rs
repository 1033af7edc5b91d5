//! Statistics for comparing estimated association distributions with human
//! ratings: correlation, significance thresholds, split-half reliability,
//! entropy-based specificity, multiple regression and rating-count curves.

mod correlation;
mod evaluation;
mod learning;
mod regress;
mod reliability;
mod specificity;
pub mod student_t;

pub use correlation::{critical_r, paired_t_test, pearson, spearman_brown, PairedTTest};
pub use evaluation::{
    bonferroni_alpha, significance_threshold, write_evaluations_csv, ConceptEvaluation,
    EvaluationError, DEFAULT_ALPHA,
};
pub use learning::{learning_curve, ShuffleConfig};
pub use regress::{regress, RegressionSummary, RegressionTerm};
pub use reliability::{split_half_reliability, HumanRatingSet, MAX_SPLIT_RESAMPLES};
pub use specificity::{cohort_specificities, entropy, specificity, SPECIFICITY_EPSILON};

use thiserror::Error;

use crate::ols::OlsError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },
    #[error("correlation undefined: constant input vector")]
    UndefinedCorrelation,
    #[error("Spearman-Brown correction undefined at r = -1")]
    SpearmanBrownUndefined,
    #[error("degenerate test: differences have zero variance")]
    DegenerateTest,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("entropy undefined: all weights are zero")]
    AllZero,
    #[error("specificity normalization needs a cohort with distinct entropies")]
    DegenerateCohort,
    #[error("entropy {0} is not a member of the cohort")]
    NotInCohort(f64),
    #[error("split-half halves stayed constant after {0} resamples")]
    ConstantHalves(usize),
    #[error("color {color_index} has {available} repetitions, {needed} needed")]
    InsufficientRepetitions {
        color_index: usize,
        available: usize,
        needed: usize,
    },
    #[error("regression: {0}")]
    Regression(#[from] OlsError),
}

pub type Result<T> = std::result::Result<T, MetricsError>;

pub(crate) fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}
