use std::collections::HashMap;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use super::{line_of, locate_columns, StoreError};

/// Word concreteness on the 1-5 scale, keyed by lowercase word.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConcretenessNorms {
    ratings: HashMap<String, f64>,
    /// Rows that overwrote an earlier row for the same word.
    pub duplicates: usize,
}

impl ConcretenessNorms {
    pub fn lookup(&self, word: &str) -> Option<f64> {
        self.ratings.get(&word.trim().to_lowercase()).copied()
    }

    pub fn len(&self) -> usize {
        self.ratings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratings.is_empty()
    }
}

pub fn load_concreteness(path: &Path) -> Result<ConcretenessNorms, StoreError> {
    let file = File::open(path).map_err(|e| StoreError::io(path, e))?;
    read_concreteness(file)
}

/// Read a `word,concreteness` CSV. Later duplicates replace earlier ones.
pub fn read_concreteness<R: Read>(reader: R) -> Result<ConcretenessNorms, StoreError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let ([wi, ci], _) = locate_columns(rdr.headers()?, ["word", "concreteness"])?;
    let mut norms = ConcretenessNorms::default();
    for row in rdr.records() {
        let row = row?;
        let line = line_of(&row);
        let word = row.get(wi).unwrap_or_default().to_lowercase();
        let raw = row.get(ci).unwrap_or_default();
        let value: f64 = raw.parse().map_err(|_| StoreError::Row {
            line,
            message: format!("malformed concreteness {raw:?}"),
        })?;
        if !(1.0..=5.0).contains(&value) {
            return Err(StoreError::Row {
                line,
                message: format!("concreteness {value} outside [1, 5]"),
            });
        }
        if norms.ratings.insert(word.clone(), value).is_some() {
            log::warn!("line {line}: duplicate word {word:?}, keeping the later value");
            norms.duplicates += 1;
        }
    }
    Ok(norms)
}
