use serde::{Deserialize, Serialize};

use super::{mean, student_t, MetricsError, Result};

/// Sample Pearson product-moment correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(MetricsError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(MetricsError::TooFewObservations {
            needed: 3,
            got: x.len(),
        });
    }
    let mx = mean(x);
    let my = mean(y);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(MetricsError::UndefinedCorrelation);
    }
    let r = sxy / (sxx.sqrt() * syy.sqrt());
    if !r.is_finite() {
        return Err(MetricsError::UndefinedCorrelation);
    }
    Ok(r.clamp(-1.0, 1.0))
}

/// Step-up of a half-test correlation to full length: 2r / (1 + r).
pub fn spearman_brown(r: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&r) {
        return Err(MetricsError::InvalidArgument(format!(
            "correlation {r} outside [-1, 1]"
        )));
    }
    if r == -1.0 {
        return Err(MetricsError::SpearmanBrownUndefined);
    }
    Ok(2.0 * r / (1.0 + r))
}

/// Smallest |r| that is significant in a two-tailed test at `alpha` with `df`
/// degrees of freedom.
pub fn critical_r(alpha: f64, df: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(MetricsError::InvalidArgument(format!(
            "alpha {alpha} outside (0, 1)"
        )));
    }
    if df == 0 {
        return Err(MetricsError::InvalidArgument(
            "df must be at least 1".into(),
        ));
    }
    let df = df as f64;
    let t = student_t::two_sided_critical(alpha, df);
    Ok(t / (t * t + df).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairedTTest {
    pub t: f64,
    pub df: usize,
    pub p: f64,
    pub mean_difference: f64,
}

/// Paired-samples t test on `a - b`, two-tailed.
pub fn paired_t_test(a: &[f64], b: &[f64]) -> Result<PairedTTest> {
    if a.len() != b.len() {
        return Err(MetricsError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let n = a.len();
    if n < 2 {
        return Err(MetricsError::TooFewObservations { needed: 2, got: n });
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let m = mean(&diffs);
    let var = diffs.iter().map(|d| (d - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    // relative threshold: a constant offset leaves only rounding noise
    let scale = diffs
        .iter()
        .map(|d| d.abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    if var.sqrt() <= scale * 1e-12 {
        return Err(MetricsError::DegenerateTest);
    }
    let t = m / (var.sqrt() / (n as f64).sqrt());
    let df = n - 1;
    Ok(PairedTTest {
        t,
        df,
        p: student_t::two_sided_p(t, df as f64),
        mean_difference: m,
    })
}
