//! Per-concept colorimetric regression: association ≈ L, C and the first two
//! hue harmonics plus a constant, fit by OLS over a color library.

mod published;

pub use published::{load_published_weights, PublishedWeights, PUBLISHED_WEIGHTS_CSV};

use std::io::Write;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colorlib::ColorLibrary;
use crate::colorspace::{normalize_degrees, LchColor};
use crate::estimator::AssociationDistribution;
use crate::metrics::{pearson, MetricsError};
use crate::numfmt::{opt_sig6, sig6};
use crate::ols::{self, OlsError};

pub const COLUMN_NAMES: [&str; 7] = [
    "w_L", "w_C", "w_cos_h", "w_sin_h", "w_cos_2h", "w_sin_2h", "k",
];

#[derive(Debug, Error)]
pub enum RegressionError {
    #[error("library is empty")]
    EmptyLibrary,
    #[error("{values} associations for a design with {rows} rows")]
    LengthMismatch { rows: usize, values: usize },
    #[error(transparent)]
    Ols(#[from] OlsError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("table fixture: {0}")]
    Fixture(String),
}

/// Weights of the seven predictors, in design-column order.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ColorimetricWeights {
    pub w_l: f64,
    pub w_c: f64,
    pub w_cos_h: f64,
    pub w_sin_h: f64,
    pub w_cos_2h: f64,
    pub w_sin_2h: f64,
    pub k: f64,
}

impl ColorimetricWeights {
    pub fn from_array(a: [f64; 7]) -> Self {
        ColorimetricWeights {
            w_l: a[0],
            w_c: a[1],
            w_cos_h: a[2],
            w_sin_h: a[3],
            w_cos_2h: a[4],
            w_sin_2h: a[5],
            k: a[6],
        }
    }

    pub fn to_array(&self) -> [f64; 7] {
        [
            self.w_l,
            self.w_c,
            self.w_cos_h,
            self.w_sin_h,
            self.w_cos_2h,
            self.w_sin_2h,
            self.k,
        ]
    }

    /// Hue angle (degrees, [0, 360)) the first harmonic peaks at.
    pub fn dominant_hue_deg(&self) -> f64 {
        normalize_degrees(self.w_sin_h.atan2(self.w_cos_h).to_degrees())
    }

    /// Axis (degrees, [0, 180)) along which the second harmonic peaks.
    pub fn dominant_axis_deg(&self) -> f64 {
        let axis = (self.w_sin_2h.atan2(self.w_cos_2h) / 2.0).to_degrees();
        let axis = axis.rem_euclid(180.0);
        if axis >= 180.0 {
            0.0
        } else {
            axis
        }
    }
}

/// One design row: [L, C, cos h, sin h, cos 2h, sin 2h, 1].
pub fn design_row(lch: &LchColor) -> [f64; 7] {
    let h = lch.h.to_radians();
    [
        lch.l,
        lch.c,
        h.cos(),
        h.sin(),
        (2.0 * h).cos(),
        (2.0 * h).sin(),
        1.0,
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColorimetricDesign {
    pub library_name: String,
    pub matrix: DMatrix<f64>,
}

impl ColorimetricDesign {
    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rank(&self) -> usize {
        ols::rank(&self.matrix)
    }
}

pub fn build_design(library: &ColorLibrary) -> Result<ColorimetricDesign, RegressionError> {
    if library.is_empty() {
        return Err(RegressionError::EmptyLibrary);
    }
    let rows: Vec<[f64; 7]> = library.colors.iter().map(|c| design_row(&c.lch)).collect();
    Ok(ColorimetricDesign {
        library_name: library.name.clone(),
        matrix: DMatrix::from_fn(rows.len(), 7, |i, j| rows[i][j]),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColorimetricFit {
    pub concept: String,
    pub weights: ColorimetricWeights,
    /// Correlation of fitted with observed values; absent when the
    /// observations are constant.
    pub fit_r: Option<f64>,
    pub dominant_hue_deg: f64,
    pub dominant_axis_deg: f64,
}

impl ColorimetricFit {
    pub fn from_weights(concept: impl Into<String>, weights: ColorimetricWeights) -> Self {
        ColorimetricFit {
            concept: concept.into(),
            weights,
            fit_r: None,
            dominant_hue_deg: weights.dominant_hue_deg(),
            dominant_axis_deg: weights.dominant_axis_deg(),
        }
    }
}

pub fn fit_concept(
    design: &ColorimetricDesign,
    associations: &AssociationDistribution,
) -> Result<ColorimetricFit, RegressionError> {
    fit_values(design, &associations.concept, &associations.values)
}

pub fn fit_values(
    design: &ColorimetricDesign,
    concept: &str,
    values: &[f64],
) -> Result<ColorimetricFit, RegressionError> {
    if values.len() != design.rows() {
        return Err(RegressionError::LengthMismatch {
            rows: design.rows(),
            values: values.len(),
        });
    }
    let fit = ols::fit(&design.matrix, values)?;
    let mut w = [0.0; 7];
    w.copy_from_slice(&fit.coefficients);
    let mut out = ColorimetricFit::from_weights(concept, ColorimetricWeights::from_array(w));
    out.fit_r = match pearson(&fit.fitted, values) {
        Ok(r) => Some(r),
        Err(MetricsError::UndefinedCorrelation) => None,
        Err(e) => return Err(RegressionError::Fixture(e.to_string())),
    };
    Ok(out)
}

/// Model output for every library color. Not clamped to [0, 1].
pub fn predict(fit: &ColorimetricFit, colors: &ColorLibrary) -> Vec<f64> {
    let w = fit.weights.to_array();
    colors
        .colors
        .iter()
        .map(|c| design_row(&c.lch).iter().zip(&w).map(|(x, b)| x * b).sum())
        .collect()
}

pub fn write_fits_csv<W: Write>(out: W, fits: &[ColorimetricFit]) -> Result<(), RegressionError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["concept"];
    header.extend(COLUMN_NAMES);
    header.extend(["fit_r", "dominant_hue_deg", "dominant_axis_deg"]);
    w.write_record(&header)?;
    for f in fits {
        let mut row = vec![f.concept.clone()];
        row.extend(f.weights.to_array().map(sig6));
        row.push(opt_sig6(f.fit_r));
        row.push(sig6(f.dominant_hue_deg));
        row.push(sig6(f.dominant_axis_deg));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
