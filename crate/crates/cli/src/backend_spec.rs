use std::collections::HashMap;
use std::path::PathBuf;

use anyhow::{Context, Result};
use chroma_assoc::colorlib::ColorLibrary;
use chroma_assoc::estimator::mock::synthetic_ground_truth;
use chroma_assoc::estimator::{GroundTruth, HttpBackend, MockBackend, RatingBackend};

use crate::failure::config;

pub const DEFAULT_SYNTHETIC_NOISE: f64 = 0.1;

/// Parsed `--backend` value.
#[derive(Debug, Clone, PartialEq)]
pub enum BackendSpec {
    Http,
    Constant(f64),
    Synthetic { noise: f64 },
    Truth { path: PathBuf, noise: f64 },
}

impl BackendSpec {
    pub fn parse(s: &str) -> Result<Self> {
        if s == "http" {
            return Ok(BackendSpec::Http);
        }
        let Some(rest) = s.strip_prefix("mock:") else {
            return Err(config(format!(
                "unknown backend {s:?}; use http, mock:constant=V, mock:synthetic[,noise=SD] or mock:truth=PATH[,noise=SD]"
            )));
        };
        let mut parts = rest.split(',');
        let head = parts.next().unwrap_or_default();
        let mut opts = HashMap::new();
        for p in parts {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| config(format!("backend option {p:?} is not key=value")))?;
            opts.insert(k, v);
        }
        let noise = match opts.remove("noise") {
            Some(v) => parse_non_negative(v, "noise")?,
            None => DEFAULT_SYNTHETIC_NOISE,
        };
        if let Some(k) = opts.keys().next() {
            return Err(config(format!("unknown backend option {k:?}")));
        }
        if head == "synthetic" {
            return Ok(BackendSpec::Synthetic { noise });
        }
        match head.split_once('=') {
            Some(("constant", v)) => {
                let v = parse_non_negative(v, "constant")?;
                if v > 1.0 {
                    return Err(config("mock constant must be within [0, 1]"));
                }
                Ok(BackendSpec::Constant(v))
            }
            Some(("truth", path)) if !path.is_empty() => Ok(BackendSpec::Truth {
                path: PathBuf::from(path),
                noise,
            }),
            _ => Err(config(format!("unknown mock backend {head:?}"))),
        }
    }

    pub fn is_mock(&self) -> bool {
        !matches!(self, BackendSpec::Http)
    }

    /// Whether responses depend on a seed (any noise at nonzero temperature).
    pub fn is_seeded(&self) -> bool {
        match self {
            BackendSpec::Http | BackendSpec::Constant(_) => false,
            BackendSpec::Synthetic { .. } => true,
            BackendSpec::Truth { noise, .. } => *noise > 0.0,
        }
    }

    pub fn build(&self, library: &ColorLibrary, seed: u64) -> Result<Box<dyn RatingBackend>> {
        Ok(match self {
            BackendSpec::Http => {
                Box::new(HttpBackend::from_env().map_err(|e| config(e.to_string()))?)
            }
            BackendSpec::Constant(v) => Box::new(MockBackend::constant(*v)),
            BackendSpec::Synthetic { noise } => Box::new(MockBackend::new(
                synthetic_ground_truth(library, seed),
                *noise,
                seed,
            )),
            BackendSpec::Truth { path, noise } => {
                let truth = load_truth(path, library)?;
                Box::new(MockBackend::new(truth, *noise, seed))
            }
        })
    }
}

fn parse_non_negative(v: &str, what: &str) -> Result<f64> {
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() && x >= 0.0 => Ok(x),
        _ => Err(config(format!(
            "{what} must be a non-negative number, got {v:?}"
        ))),
    }
}

/// `concept,color_index,value` table keyed for lookup by (concept, hex).
/// Pairs absent from the file rate 0.
fn load_truth(path: &PathBuf, library: &ColorLibrary) -> Result<GroundTruth> {
    let mut rdr = csv::Reader::from_path(path)
        .map_err(|e| config(format!("cannot read truth file {}: {e}", path.display())))?;
    let header: Vec<&str> = rdr.headers()?.iter().collect();
    if header != ["concept", "color_index", "value"] {
        return Err(config(format!(
            "{}: expected header concept,color_index,value",
            path.display()
        )));
    }
    let mut table: HashMap<(String, String), f64> = HashMap::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row.with_context(|| format!("reading {}", path.display()))?;
        let bad = || config(format!("{}: malformed row {}", path.display(), i + 2));
        let concept = row.get(0).ok_or_else(bad)?.to_string();
        let idx: usize = row.get(1).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let value: f64 = row.get(2).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let hex = idx
            .checked_sub(1)
            .and_then(|i| library.colors.get(i))
            .ok_or_else(bad)?
            .hex
            .clone();
        table.insert((concept, hex), value.clamp(0.0, 1.0));
    }
    Ok(GroundTruth::function(move |concept, hex| {
        table
            .get(&(concept.to_string(), hex.to_string()))
            .copied()
            .unwrap_or(0.0)
    }))
}
