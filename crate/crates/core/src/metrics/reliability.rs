use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{pearson, spearman_brown, MetricsError, Result};
use crate::seed::rng_from;

/// Resamples allowed per iteration when a half produces a constant mean
/// vector.
pub const MAX_SPLIT_RESAMPLES: usize = 100;

/// Ratings from every participant for one concept, participants × colors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HumanRatingSet {
    pub concept: String,
    pub participant_ids: Vec<String>,
    pub ratings: Vec<Vec<f64>>,
}

impl HumanRatingSet {
    pub fn new(
        concept: impl Into<String>,
        participant_ids: Vec<String>,
        ratings: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if participant_ids.len() != ratings.len() {
            return Err(MetricsError::LengthMismatch {
                left: participant_ids.len(),
                right: ratings.len(),
            });
        }
        if let Some(first) = ratings.first() {
            for row in &ratings {
                if row.len() != first.len() {
                    return Err(MetricsError::LengthMismatch {
                        left: first.len(),
                        right: row.len(),
                    });
                }
                if let Some(v) = row.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                    return Err(MetricsError::InvalidArgument(format!(
                        "rating {v} outside [0, 1]"
                    )));
                }
            }
        }
        Ok(HumanRatingSet {
            concept: concept.into(),
            participant_ids,
            ratings,
        })
    }

    pub fn n_participants(&self) -> usize {
        self.ratings.len()
    }

    pub fn n_colors(&self) -> usize {
        self.ratings.first().map_or(0, Vec::len)
    }

    /// Per-color mean over all participants.
    pub fn mean_ratings(&self) -> Vec<f64> {
        self.mean_of(&(0..self.n_participants()).collect::<Vec<_>>())
    }

    fn mean_of(&self, participants: &[usize]) -> Vec<f64> {
        let mut sums = vec![0.0; self.n_colors()];
        for &p in participants {
            for (s, v) in sums.iter_mut().zip(&self.ratings[p]) {
                *s += v;
            }
        }
        let n = participants.len() as f64;
        sums.into_iter().map(|s| s / n).collect()
    }
}

/// Mean Spearman-Brown corrected split-half correlation over `n_iterations`
/// random splits of the participants into halves of ⌊n/2⌋ and ⌈n/2⌉.
pub fn split_half_reliability(h: &HumanRatingSet, n_iterations: usize, seed: u64) -> Result<f64> {
    let n = h.n_participants();
    if n < 2 {
        return Err(MetricsError::TooFewObservations { needed: 2, got: n });
    }
    if n_iterations == 0 {
        return Err(MetricsError::InvalidArgument(
            "n_iterations must be at least 1".into(),
        ));
    }
    let mut rng = rng_from(seed);
    let mut order: Vec<usize> = (0..n).collect();
    let half = n / 2;
    let mut total = 0.0;
    for _ in 0..n_iterations {
        let mut attempt = 0;
        let r = loop {
            order.shuffle(&mut rng);
            let a = h.mean_of(&order[..half]);
            let b = h.mean_of(&order[half..]);
            match pearson(&a, &b) {
                Ok(r) => break r,
                Err(MetricsError::UndefinedCorrelation) if attempt < MAX_SPLIT_RESAMPLES => {
                    attempt += 1;
                }
                Err(MetricsError::UndefinedCorrelation) => {
                    return Err(MetricsError::ConstantHalves(MAX_SPLIT_RESAMPLES))
                }
                Err(e) => return Err(e),
            }
        };
        total += spearman_brown(r)?;
    }
    Ok(total / n_iterations as f64)
}
