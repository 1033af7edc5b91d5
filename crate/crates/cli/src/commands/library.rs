use std::fs::File;

use anyhow::{Context, Result};
use chroma_assoc::colorlib::{generate_grid_library, write_library_csv, GridSpec};
use chroma_assoc::colorspace::{in_srgb_gamut, WhitePoint};
use serde_json::json;

use super::summary;
use crate::failure::config;
use crate::rundir::load_library;
use crate::LibraryArgs;

pub fn run(args: LibraryArgs) -> Result<String> {
    let library = match args.grid_delta_e {
        Some(de) => {
            if !(de.is_finite() && de > 0.0) {
                return Err(config("--grid-delta-e must be positive"));
            }
            generate_grid_library(&GridSpec::new(de, args.planes.clone()), |lab| {
                in_srgb_gamut(lab, WhitePoint::D65)
            })
            .map_err(|e| config(e.to_string()))?
        }
        None => load_library(&args.library)?,
    };
    let file =
        File::create(&args.out).with_context(|| format!("writing {}", args.out.display()))?;
    write_library_csv(&library, file)?;
    Ok(summary(
        "library",
        json!({
            "out": args.out.display().to_string(),
            "name": library.name,
            "colors": library.len(),
            "duplicate_hexes": library.duplicate_hexes(),
        }),
    ))
}
