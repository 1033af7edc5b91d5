//! File formats: human rating CSVs, concreteness norms, the JSON-lines
//! rating cache, run manifests and per-concept distribution CSVs.

mod cache;
mod concreteness;
mod distribution;
mod human;
mod manifest;

pub use cache::{read_cache, RatingCache};
pub use concreteness::{load_concreteness, read_concreteness, ConcretenessNorms};
pub use distribution::{read_distribution_csv, write_distribution_csv};
pub use human::{
    load_human_ratings, read_human_ratings, write_human_ratings, HumanRatings, RejectedParticipant,
};
pub use manifest::{resume_run, RunManifest, TrialState};

use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Write(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("schema: {0}")]
    Schema(String),
    #[error("line {line}: {message}")]
    Row { line: u64, message: String },
    #[error("run mismatch: {0}")]
    Mismatch(String),
}

impl StoreError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        StoreError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Column positions for `required` in a CSV header. Extra columns are
/// reported so callers can warn about them.
pub(crate) fn locate_columns<const N: usize>(
    header: &csv::StringRecord,
    required: [&str; N],
) -> Result<([usize; N], Vec<String>), StoreError> {
    let names: Vec<String> = header
        .iter()
        .map(|h| h.trim().to_ascii_lowercase())
        .collect();
    let mut idx = [0; N];
    for (slot, want) in idx.iter_mut().zip(required) {
        *slot = names.iter().position(|n| n == want).ok_or_else(|| {
            StoreError::Schema(format!(
                "missing column {want:?}; expected header {}",
                required.join(",")
            ))
        })?;
    }
    let extra = names
        .into_iter()
        .filter(|n| !required.contains(&n.as_str()))
        .collect::<Vec<_>>();
    for col in &extra {
        log::warn!("ignoring unknown column {col:?}");
    }
    Ok((idx, extra))
}

pub(crate) fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}
