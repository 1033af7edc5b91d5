use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{student_t, MetricsError, Result};
use crate::ols;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionTerm {
    pub name: String,
    pub coefficient: f64,
    pub std_error: f64,
    pub t: f64,
    pub p: f64,
}

/// OLS summary; the intercept is the last term, named `intercept`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionSummary {
    pub terms: Vec<RegressionTerm>,
    pub r_squared: f64,
    pub n_obs: usize,
    pub df_residual: usize,
}

impl RegressionSummary {
    pub fn term(&self, name: &str) -> Option<&RegressionTerm> {
        self.terms.iter().find(|t| t.name == name)
    }
}

/// Multiple regression of `response` on the named predictors plus an
/// intercept, with classical standard errors and two-tailed p values.
pub fn regress(predictors: &[(String, Vec<f64>)], response: &[f64]) -> Result<RegressionSummary> {
    let n = response.len();
    let k = predictors.len() + 1;
    for (_, col) in predictors {
        if col.len() != n {
            return Err(MetricsError::LengthMismatch {
                left: col.len(),
                right: n,
            });
        }
    }
    if n <= k {
        return Err(MetricsError::TooFewObservations {
            needed: k + 1,
            got: n,
        });
    }
    let design = DMatrix::from_fn(n, k, |i, j| {
        predictors.get(j).map_or(1.0, |(_, col)| col[i])
    });
    let fit = ols::fit(&design, response)?;

    let y_mean = super::mean(response);
    let tss: f64 = response.iter().map(|y| (y - y_mean).powi(2)).sum();
    if tss == 0.0 {
        return Err(MetricsError::UndefinedCorrelation);
    }
    let rss = fit.residual_sum_of_squares();
    let df_residual = n - k;
    let sigma2 = rss / df_residual as f64;

    let terms = (0..k)
        .map(|j| {
            let name = predictors
                .get(j)
                .map_or_else(|| "intercept".to_string(), |(name, _)| name.clone());
            let coefficient = fit.coefficients[j];
            let std_error = (sigma2 * fit.xtx_inverse[(j, j)]).sqrt();
            let t = coefficient / std_error;
            RegressionTerm {
                name,
                coefficient,
                std_error,
                t,
                p: student_t::two_sided_p(t, df_residual as f64),
            }
        })
        .collect();
    Ok(RegressionSummary {
        terms,
        r_squared: (1.0 - rss / tss).clamp(0.0, 1.0),
        n_obs: n,
        df_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ols::OlsError;

    fn cols(x1: &[f64], x2: &[f64]) -> Vec<(String, Vec<f64>)> {
        vec![("x1".into(), x1.to_vec()), ("x2".into(), x2.to_vec())]
    }

    #[test]
    fn noiseless_recovery() {
        let x1 = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0];
        let x2 = [1.0, 0.0, 3.0, 1.0, 2.0, 7.0];
        let y: Vec<f64> = x1
            .iter()
            .zip(&x2)
            .map(|(a, b)| 2.0 * a - 3.0 * b + 1.0)
            .collect();
        let s = regress(&cols(&x1, &x2), &y).unwrap();
        assert!((s.term("x1").unwrap().coefficient - 2.0).abs() < 1e-8);
        assert!((s.term("x2").unwrap().coefficient + 3.0).abs() < 1e-8);
        assert!((s.term("intercept").unwrap().coefficient - 1.0).abs() < 1e-8);
        assert!((s.r_squared - 1.0).abs() < 1e-12);
    }

    // Reference values from statsmodels OLS on the same data.
    #[test]
    fn matches_reference_ols() {
        let x1 = [
            0.12, 0.85, 0.33, 0.47, 0.91, 0.05, 0.66, 0.29, 0.74, 0.58, 0.18, 0.95,
        ];
        let x2 = [3.1, 2.2, 4.8, 1.9, 3.7, 2.5, 4.1, 1.2, 2.9, 3.3, 4.4, 1.7];
        let y = [
            1.05, 2.31, 0.42, 1.98, 1.77, 1.24, 1.01, 2.36, 1.83, 1.12, 0.27, 2.88,
        ];
        let s = regress(&cols(&x1, &x2), &y).unwrap();
        let expect = [
            (
                "x1",
                1.2129245075147264,
                8.69430548224957,
                1.1317216826569237e-05,
            ),
            (
                "x2",
                -0.5640809400075806,
                -14.414292187438665,
                1.593564186760637e-07,
            ),
            (
                "intercept",
                2.5832392017671766,
                17.1028397842894,
                3.5925625987750666e-08,
            ),
        ];
        for (name, b, t, p) in expect {
            let term = s.term(name).unwrap();
            assert!((term.coefficient - b).abs() < 1e-10, "{name}");
            assert!((term.t - t).abs() < 1e-6, "{name}");
            assert!((term.p - p).abs() / p < 1e-6, "{name}");
        }
        assert!((s.r_squared - 0.9730721493408234).abs() < 1e-10);
        assert_eq!(s.df_residual, 9);
    }

    #[test]
    fn singular_and_short_designs() {
        let x = [1.0, 2.0, 3.0, 5.0, 8.0];
        let y = [1.0, 0.0, 2.0, 4.0, 3.0];
        assert!(matches!(
            regress(&cols(&x, &x), &y),
            Err(MetricsError::Regression(OlsError::Singular { .. }))
        ));
        assert!(matches!(
            regress(&cols(&x[..3], &x[..3]), &y[..3]),
            Err(MetricsError::TooFewObservations { .. })
        ));
        let json = serde_json::to_string(&regress(&[("x".into(), x.to_vec())], &y).unwrap());
        assert!(json.unwrap().contains("\"r_squared\""));
    }
}
