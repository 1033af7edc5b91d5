use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::cache::read_cache;
use super::StoreError;
use crate::estimator::{RatingKey, RatingProtocol, RatingRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialState {
    Pending,
    Done,
    Failed,
}

impl TrialState {
    fn code(self) -> char {
        match self {
            TrialState::Pending => '.',
            TrialState::Done => 'd',
            TrialState::Failed => 'f',
        }
    }

    fn from_code(c: char) -> Option<Self> {
        match c {
            '.' => Some(TrialState::Pending),
            'd' => Some(TrialState::Done),
            'f' => Some(TrialState::Failed),
            _ => None,
        }
    }
}

/// Description and progress of one estimation run.
///
/// `status` maps each concept to one string per library color, holding one
/// character per repetition: `.` pending, `d` done, `f` failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub protocol: RatingProtocol,
    pub library_name: String,
    pub n_colors: usize,
    pub concepts: Vec<String>,
    pub seed: Option<u64>,
    pub created_at: String,
    pub updated_at: String,
    pub status: BTreeMap<String, Vec<String>>,
}

impl RunManifest {
    pub fn new(
        protocol: RatingProtocol,
        library_name: impl Into<String>,
        n_colors: usize,
        concepts: Vec<String>,
        seed: Option<u64>,
        timestamp: impl Into<String>,
    ) -> Self {
        let timestamp = timestamp.into();
        let row = ".".repeat(protocol.repetitions);
        let status = concepts
            .iter()
            .map(|c| (c.clone(), vec![row.clone(); n_colors]))
            .collect();
        RunManifest {
            protocol,
            library_name: library_name.into(),
            n_colors,
            concepts,
            seed,
            created_at: timestamp.clone(),
            updated_at: timestamp,
            status,
        }
    }

    pub fn load(path: &Path) -> Result<Self, StoreError> {
        let text = fs::read_to_string(path).map_err(|e| StoreError::io(path, e))?;
        let m: RunManifest = serde_json::from_str(&text)?;
        m.validate()?;
        Ok(m)
    }

    /// Write atomically via a sibling temporary file.
    pub fn save(&self, path: &Path) -> Result<(), StoreError> {
        let tmp = path.with_extension("json.tmp");
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(&tmp, text).map_err(|e| StoreError::io(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| StoreError::io(path, e))
    }

    /// Every (concept, color, repetition) must have exactly one state.
    pub fn validate(&self) -> Result<(), StoreError> {
        let concepts: BTreeSet<&String> = self.concepts.iter().collect();
        if concepts.len() != self.concepts.len() {
            return Err(StoreError::Schema("duplicate concept in manifest".into()));
        }
        if self.status.keys().collect::<BTreeSet<_>>() != concepts {
            return Err(StoreError::Schema(
                "status does not cover the concept list".into(),
            ));
        }
        for (concept, rows) in &self.status {
            let ok = rows.len() == self.n_colors
                && rows.iter().all(|r| {
                    r.chars().count() == self.protocol.repetitions
                        && r.chars().all(|c| TrialState::from_code(c).is_some())
                });
            if !ok {
                return Err(StoreError::Schema(format!(
                    "status for {concept:?} is not {} colors x {} repetitions",
                    self.n_colors, self.protocol.repetitions
                )));
            }
        }
        Ok(())
    }

    pub fn keys(&self) -> impl Iterator<Item = RatingKey> + '_ {
        self.concepts.iter().flat_map(move |c| {
            (1..=self.n_colors).flat_map(move |color_index| {
                (0..self.protocol.repetitions).map(move |repetition| RatingKey {
                    concept: c.clone(),
                    color_index,
                    repetition,
                })
            })
        })
    }

    pub fn state(&self, key: &RatingKey) -> Option<TrialState> {
        self.status
            .get(&key.concept)?
            .get(key.color_index.checked_sub(1)?)?
            .chars()
            .nth(key.repetition)
            .and_then(TrialState::from_code)
    }

    fn set(&mut self, key: &RatingKey, state: TrialState) {
        let Some(row) = self
            .status
            .get_mut(&key.concept)
            .and_then(|rows| rows.get_mut(key.color_index.wrapping_sub(1)))
        else {
            return;
        };
        *row = row
            .chars()
            .enumerate()
            .map(|(i, c)| if i == key.repetition { state.code() } else { c })
            .collect();
    }

    /// Mark trials done (any successful record) or failed (only failures).
    pub fn apply_records(&mut self, records: &[RatingRecord], timestamp: impl Into<String>) {
        for r in records {
            let key = r.key();
            match (r.succeeded(), self.state(&key)) {
                (true, Some(_)) => self.set(&key, TrialState::Done),
                (false, Some(TrialState::Pending)) => self.set(&key, TrialState::Failed),
                _ => {}
            }
        }
        self.updated_at = timestamp.into();
    }

    pub fn count(&self, state: TrialState) -> usize {
        self.status
            .values()
            .flatten()
            .flat_map(|r| r.chars())
            .filter(|&c| c == state.code())
            .count()
    }

    pub fn is_complete(&self) -> bool {
        self.count(TrialState::Done)
            == self.concepts.len() * self.n_colors * self.protocol.repetitions
    }

    /// Error if `records` were produced by a different protocol, model or
    /// concept set than this run describes.
    pub fn check_records(&self, records: &[RatingRecord]) -> Result<(), StoreError> {
        for r in records {
            if r.protocol_name != self.protocol.name.as_str()
                || r.model_id != self.protocol.model_id
            {
                return Err(StoreError::Mismatch(format!(
                    "cache record from {}/{} but run uses {}/{}",
                    r.protocol_name, r.model_id, self.protocol.name, self.protocol.model_id
                )));
            }
            if self.state(&r.key()).is_none() {
                return Err(StoreError::Mismatch(format!(
                    "cache record ({}, color {}, repetition {}) is outside the run",
                    r.concept, r.color_index, r.repetition
                )));
            }
        }
        Ok(())
    }
}

/// Keys of the run that still lack a successfully parsed record in the
/// cache at `cache_path`.
pub fn resume_run(
    manifest: &RunManifest,
    cache_path: &Path,
) -> Result<BTreeSet<RatingKey>, StoreError> {
    let records = read_cache(cache_path)?;
    manifest.check_records(&records)?;
    let done: BTreeSet<RatingKey> = records
        .iter()
        .filter(|r| r.succeeded())
        .map(RatingRecord::key)
        .collect();
    Ok(manifest.keys().filter(|k| !done.contains(k)).collect())
}
