use super::{MetricsError, Result};

/// Guards the logarithm at the most diffuse end of the cohort.
pub const SPECIFICITY_EPSILON: f64 = 1e-6;

/// Shannon entropy (nats) of `values` normalized to a probability vector.
///
/// Terms are summed in sorted order, so any permutation of `values` yields
/// the bit-identical result.
pub fn entropy(values: &[f64]) -> Result<f64> {
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(MetricsError::InvalidArgument(format!(
            "weight {v} is negative or non-finite"
        )));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let total: f64 = sorted.iter().sum();
    if total == 0.0 {
        return Err(MetricsError::AllZero);
    }
    Ok(sorted
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| {
            let p = v / total;
            -p * p.ln()
        })
        .sum())
}

/// Peakiness of one distribution relative to a cohort of concepts.
///
/// The entropy is min-max normalized over `cohort_entropies` (which must
/// include this distribution's own entropy) and mapped through
/// `ln(1 - H_norm + ε)`; larger values mean fewer, stronger associates.
pub fn specificity(values: &[f64], cohort_entropies: &[f64]) -> Result<f64> {
    let h = entropy(values)?;
    normalized_specificity(h, cohort_entropies)
}

fn normalized_specificity(h: f64, cohort: &[f64]) -> Result<f64> {
    if cohort.len() < 2 {
        return Err(MetricsError::DegenerateCohort);
    }
    let min = cohort.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = cohort.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max.partial_cmp(&min) != Some(std::cmp::Ordering::Greater) {
        return Err(MetricsError::DegenerateCohort);
    }
    let tol = 1e-12 * max.abs().max(1.0);
    if !cohort.iter().any(|c| (c - h).abs() <= tol) {
        return Err(MetricsError::NotInCohort(h));
    }
    let h_norm = ((h - min) / (max - min)).clamp(0.0, 1.0);
    Ok((1.0 - h_norm + SPECIFICITY_EPSILON).ln())
}

/// Specificity of every distribution against the cohort they form together.
pub fn cohort_specificities(distributions: &[&[f64]]) -> Result<Vec<f64>> {
    let entropies = distributions
        .iter()
        .map(|d| entropy(d))
        .collect::<Result<Vec<_>>>()?;
    entropies
        .iter()
        .map(|&h| normalized_specificity(h, &entropies))
        .collect()
}
