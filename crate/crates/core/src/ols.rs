//! Ordinary least squares on an explicit design matrix, solved through the
//! SVD so that rank deficiency is detected rather than amplified.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

/// Smallest singular value, relative to the largest, accepted as full rank.
const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OlsError {
    #[error("design is rank deficient (condition {condition:.3e})")]
    Singular { condition: f64 },
    #[error("design has {rows} rows but response has {response} values")]
    LengthMismatch { rows: usize, response: usize },
    #[error("need more observations ({rows}) than parameters ({cols})")]
    TooFewObservations { rows: usize, cols: usize },
    #[error("non-finite value in design or response")]
    NonFinite,
}

#[derive(Debug, Clone)]
pub struct OlsFit {
    pub coefficients: Vec<f64>,
    pub fitted: Vec<f64>,
    pub residuals: Vec<f64>,
    /// (XᵀX)⁻¹, used for standard errors.
    pub xtx_inverse: DMatrix<f64>,
}

impl OlsFit {
    pub fn residual_sum_of_squares(&self) -> f64 {
        self.residuals.iter().map(|r| r * r).sum()
    }
}

/// Numerical rank of `design` under the crate's tolerance.
pub fn rank(design: &DMatrix<f64>) -> usize {
    let sv = design.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > max * RANK_TOLERANCE).count()
}

/// Fit `response ≈ design · β`. The design must already contain any
/// intercept column.
pub fn fit(design: &DMatrix<f64>, response: &[f64]) -> Result<OlsFit, OlsError> {
    let (n, p) = design.shape();
    if n != response.len() {
        return Err(OlsError::LengthMismatch {
            rows: n,
            response: response.len(),
        });
    }
    if n < p {
        return Err(OlsError::TooFewObservations { rows: n, cols: p });
    }
    if design.iter().chain(response).any(|v| !v.is_finite()) {
        return Err(OlsError::NonFinite);
    }
    let svd = design.clone().svd(true, true);
    let sv = &svd.singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if max == 0.0 || min <= max * RANK_TOLERANCE {
        return Err(OlsError::Singular {
            condition: if min == 0.0 { f64::INFINITY } else { max / min },
        });
    }
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let y = DVector::from_column_slice(response);

    // β = V Σ⁻¹ Uᵀ y
    let mut uty = u.transpose() * &y;
    for (k, s) in sv.iter().enumerate() {
        uty[k] /= s;
    }
    let beta = v_t.transpose() * uty;

    let mut v_scaled = v_t.transpose();
    for (k, s) in sv.iter().enumerate() {
        let inv = 1.0 / (s * s);
        v_scaled.column_mut(k).scale_mut(inv);
    }
    let xtx_inverse = v_scaled * v_t;

    let fitted = design * &beta;
    let residuals = &y - &fitted;
    Ok(OlsFit {
        coefficients: beta.iter().copied().collect(),
        fitted: fitted.iter().copied().collect(),
        residuals: residuals.iter().copied().collect(),
        xtx_inverse,
    })
}
