//! Layout of an estimation run directory and loaders for its contents.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use chroma_assoc::colorlib::{load_uw71, read_library_csv, ColorLibrary};
use chroma_assoc::colorspace::WhitePoint;
use chroma_assoc::estimator::AssociationDistribution;
use chroma_assoc::store::{read_distribution_csv, RunManifest};

use crate::failure::{config, input};

pub const MANIFEST: &str = "manifest.json";
pub const CACHE: &str = "ratings.jsonl";
pub const LIBRARY: &str = "library.csv";
pub const DISTRIBUTIONS: &str = "distributions";

/// File stem for a concept: lowercase ASCII letters and digits, anything
/// else becomes `_`.
pub fn concept_stem(concept: &str) -> String {
    concept
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect()
}

pub fn distribution_path(dir: &Path, concept: &str) -> PathBuf {
    dir.join(DISTRIBUTIONS)
        .join(format!("{}.csv", concept_stem(concept)))
}

/// `uw71` for the built-in library, otherwise a library CSV path.
pub fn load_library(selector: &str) -> Result<ColorLibrary> {
    if selector.eq_ignore_ascii_case("uw71") || selector.eq_ignore_ascii_case("uw-71") {
        return Ok(load_uw71()?);
    }
    let path = Path::new(selector);
    let file = File::open(path).map_err(|e| config(format!("library {}: {e}", path.display())))?;
    let name = path.file_stem().map_or_else(
        || "custom".to_string(),
        |s| s.to_string_lossy().into_owned(),
    );
    read_library_csv(&name, file, WhitePoint::D65)
        .map_err(|e| config(format!("library {}: {e}", path.display())))
}

pub struct Run {
    pub dir: PathBuf,
    pub manifest: RunManifest,
    pub library: ColorLibrary,
    pub distributions: BTreeMap<String, AssociationDistribution>,
}

impl Run {
    pub fn concepts(&self) -> Vec<String> {
        self.distributions.keys().cloned().collect()
    }
}

pub fn load_run(dir: &Path) -> Result<Run> {
    let manifest_path = dir.join(MANIFEST);
    if !manifest_path.exists() {
        return Err(input(format!(
            "{} is not a run directory (no {MANIFEST})",
            dir.display()
        )));
    }
    let manifest = RunManifest::load(&manifest_path)?;
    let lib_path = dir.join(LIBRARY);
    let lib_file =
        File::open(&lib_path).with_context(|| format!("opening {}", lib_path.display()))?;
    let library = read_library_csv(&manifest.library_name, lib_file, WhitePoint::D65)?;
    let mut distributions = BTreeMap::new();
    for concept in &manifest.concepts {
        let path = distribution_path(dir, concept);
        let file = File::open(&path).map_err(|e| {
            input(format!(
                "run {} has no distribution for {concept:?} ({}: {e})",
                dir.display(),
                path.display()
            ))
        })?;
        let dist = read_distribution_csv(file, concept, &library, manifest.protocol.repetitions)
            .with_context(|| format!("reading {}", path.display()))?;
        distributions.insert(concept.clone(), dist);
    }
    Ok(Run {
        dir: dir.to_path_buf(),
        manifest,
        library,
        distributions,
    })
}

pub fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()
        .with_context(|| format!("writing {}", path.display()))
}

/// `concept → pearson_r` from an evaluation CSV.
pub fn read_evaluation_r(path: &Path) -> Result<BTreeMap<String, f64>> {
    let mut rdr = csv::Reader::from_path(path)
        .map_err(|e| input(format!("evaluation file {}: {e}", path.display())))?;
    let header = rdr.headers()?.clone();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| input(format!("{}: missing column {name}", path.display())))
    };
    let (ci, ri) = (col("concept")?, col("pearson_r")?);
    let mut out = BTreeMap::new();
    for row in rdr.records() {
        let row = row?;
        let r: f64 = row
            .get(ri)
            .unwrap_or_default()
            .parse()
            .map_err(|_| input(format!("{}: bad pearson_r", path.display())))?;
        out.insert(row.get(ci).unwrap_or_default().to_string(), r);
    }
    Ok(out)
}

pub fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).with_context(|| format!("creating {}", path.display()))
}
