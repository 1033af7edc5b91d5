use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use super::StoreError;
use crate::estimator::{RatingRecord, RecordSink};

/// Append-only JSON-lines log of rating records. Appends from concurrent
/// callers are serialized through one writer.
pub struct RatingCache {
    path: PathBuf,
    file: Mutex<File>,
}

impl RatingCache {
    pub fn open(path: &Path) -> Result<Self, StoreError> {
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| StoreError::io(path, e))?;
        Ok(RatingCache {
            path: path.to_path_buf(),
            file: Mutex::new(file),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append_records(&self, records: &[RatingRecord]) -> Result<(), StoreError> {
        let mut buf = Vec::new();
        for r in records {
            serde_json::to_writer(&mut buf, r)?;
            buf.push(b'\n');
        }
        let mut file = self.file.lock().unwrap_or_else(|e| e.into_inner());
        file.write_all(&buf)
            .and_then(|_| file.flush())
            .map_err(|e| StoreError::io(&self.path, e))
    }
}

impl RecordSink for RatingCache {
    fn append(&self, records: &[RatingRecord]) -> std::io::Result<()> {
        self.append_records(records).map_err(std::io::Error::other)
    }
}

/// All records in a cache file; a missing file is an empty cache. A final
/// line cut short by an interrupted write is skipped with a warning.
pub fn read_cache(path: &Path) -> Result<Vec<RatingRecord>, StoreError> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(StoreError::io(path, e)),
    };
    let lines: Vec<String> = BufReader::new(file)
        .lines()
        .collect::<Result<_, _>>()
        .map_err(|e| StoreError::io(path, e))?;
    let mut out = Vec::with_capacity(lines.len());
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(line) {
            Ok(r) => out.push(r),
            Err(e) if i + 1 == lines.len() => {
                log::warn!("{}: skipping truncated last line: {e}", path.display());
            }
            Err(e) => {
                return Err(StoreError::Row {
                    line: i as u64 + 1,
                    message: e.to_string(),
                })
            }
        }
    }
    Ok(out)
}
