use rand::seq::SliceRandom;

use super::{mean, pearson, MetricsError, Result};
use crate::estimator::{values_by_color, RatingRecord};
use crate::seed::rng_from;

/// Averages the curve over random orderings of each color's repetitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShuffleConfig {
    pub seed: u64,
    pub rounds: usize,
}

/// Correlation with `human_means` when each color's estimate is the mean of
/// its first k ratings, for k = 1..=max_k.
///
/// `records` hold a single concept's ratings. Without `shuffle` the
/// repetitions are taken in recorded order.
pub fn learning_curve(
    records: &[RatingRecord],
    human_means: &[f64],
    max_k: usize,
    shuffle: Option<ShuffleConfig>,
) -> Result<Vec<f64>> {
    if max_k == 0 {
        return Err(MetricsError::InvalidArgument(
            "max_k must be at least 1".into(),
        ));
    }
    let mut per_color = values_by_color(records, human_means.len());
    for (i, v) in per_color.iter().enumerate() {
        if v.len() < max_k {
            return Err(MetricsError::InsufficientRepetitions {
                color_index: i + 1,
                available: v.len(),
                needed: max_k,
            });
        }
    }
    let Some(cfg) = shuffle else {
        return curve(&per_color, human_means, max_k);
    };
    if cfg.rounds == 0 {
        return Err(MetricsError::InvalidArgument(
            "rounds must be at least 1".into(),
        ));
    }
    let mut rng = rng_from(cfg.seed);
    let mut totals = vec![0.0; max_k];
    for _ in 0..cfg.rounds {
        for v in per_color.iter_mut() {
            v.shuffle(&mut rng);
        }
        for (t, r) in totals
            .iter_mut()
            .zip(curve(&per_color, human_means, max_k)?)
        {
            *t += r;
        }
    }
    Ok(totals.into_iter().map(|t| t / cfg.rounds as f64).collect())
}

fn curve(per_color: &[Vec<f64>], human_means: &[f64], max_k: usize) -> Result<Vec<f64>> {
    (1..=max_k)
        .map(|k| {
            let est: Vec<f64> = per_color.iter().map(|v| mean(&v[..k])).collect();
            pearson(human_means, &est)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(color_index: usize, repetition: usize, v: Option<f64>) -> RatingRecord {
        RatingRecord {
            concept: "c".into(),
            color_index,
            hex: "#000000".into(),
            repetition,
            raw_response: String::new(),
            parsed_value: v,
            attempts: 1,
            protocol_name: "stochastic_averaged".into(),
            model_id: "m".into(),
            timestamp: String::new(),
            error: None,
        }
    }

    #[test]
    fn noiseless_ratings_give_flat_curve() {
        let human = [0.1, 0.4, 0.2, 0.9];
        let truth = [0.2, 0.5, 0.1, 0.8];
        let records: Vec<_> = (1..=4)
            .flat_map(|c| (0..5).map(move |r| rec(c, r, Some(truth[c - 1]))))
            .collect();
        let curve = learning_curve(&records, &human, 5, None).unwrap();
        let r = pearson(&human, &truth).unwrap();
        assert!(curve.iter().all(|x| (x - r).abs() < 1e-12));
    }

    #[test]
    fn first_entry_uses_first_repetition_and_skips_failures() {
        let human = [0.1, 0.4, 0.9];
        let records = vec![
            rec(1, 0, None),
            rec(1, 1, Some(0.3)),
            rec(1, 0, Some(0.2)),
            rec(2, 1, Some(0.1)),
            rec(2, 0, Some(0.6)),
            rec(3, 0, Some(0.7)),
            rec(3, 1, Some(0.9)),
        ];
        let curve = learning_curve(&records, &human, 2, None).unwrap();
        assert!((curve[0] - pearson(&human, &[0.2, 0.6, 0.7]).unwrap()).abs() < 1e-12);
        assert!((curve[1] - pearson(&human, &[0.25, 0.35, 0.8]).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn insufficient_repetitions() {
        let records = vec![rec(1, 0, Some(0.1)), rec(2, 0, Some(0.2)), rec(3, 0, None)];
        assert_eq!(
            learning_curve(&records, &[0.1, 0.2, 0.3], 1, None),
            Err(MetricsError::InsufficientRepetitions {
                color_index: 3,
                available: 0,
                needed: 1
            })
        );
    }

    #[test]
    fn shuffled_curve_is_reproducible() {
        let human = [0.1, 0.4, 0.2, 0.9];
        let records: Vec<_> = (1..=4)
            .flat_map(|c| {
                (0..4).map(move |r| rec(c, r, Some(((c * 7 + r * 3) % 10) as f64 / 10.0)))
            })
            .collect();
        let cfg = Some(ShuffleConfig {
            seed: 3,
            rounds: 20,
        });
        let a = learning_curve(&records, &human, 4, cfg).unwrap();
        let b = learning_curve(&records, &human, 4, cfg).unwrap();
        assert_eq!(a, b);
        // k = max_k uses every rating, so order is irrelevant.
        let full = learning_curve(&records, &human, 4, None).unwrap();
        assert!((a[3] - full[3]).abs() < 1e-12);
    }
}
