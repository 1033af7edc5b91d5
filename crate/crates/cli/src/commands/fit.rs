use std::fs::File;

use anyhow::{Context, Result};
use chroma_assoc::colorlib::ColorLibrary;
use chroma_assoc::numfmt::sig6;
use chroma_assoc::regression::{build_design, fit_values, predict, write_fits_csv};
use chroma_assoc::store::load_human_ratings;
use serde_json::json;

use super::summary;
use crate::failure::input;
use crate::rundir::{create_dir, load_library, load_run, write_csv};
use crate::FitArgs;

pub fn run(args: FitArgs) -> Result<String> {
    let (library, data): (ColorLibrary, Vec<(String, Vec<f64>)>) = match (&args.run, &args.human) {
        (Some(dir), _) => {
            let run = load_run(dir)?;
            let data = run
                .distributions
                .into_values()
                .map(|d| (d.concept, d.values))
                .collect();
            (run.library, data)
        }
        (None, Some(path)) => {
            let library = load_library(&args.library)?;
            if !path.exists() {
                return Err(input(format!(
                    "human ratings file {} not found",
                    path.display()
                )));
            }
            let h = load_human_ratings(path, &library)?;
            let data = h
                .sets
                .into_iter()
                .map(|(c, s)| (c, s.mean_ratings()))
                .collect();
            (library, data)
        }
        (None, None) => return Err(input("either --run or --human is required")),
    };
    let design = build_design(&library)?;
    let mut fits = Vec::new();
    let mut rows = Vec::new();
    for (concept, values) in &data {
        let fit =
            fit_values(&design, concept, values).with_context(|| format!("fitting {concept:?}"))?;
        let predicted = predict(&fit, &library);
        for (i, ((c, obs), pred)) in library
            .colors
            .iter()
            .zip(values)
            .zip(&predicted)
            .enumerate()
        {
            rows.push(vec![
                concept.clone(),
                (i + 1).to_string(),
                c.hex.clone(),
                sig6(*obs),
                sig6(*pred),
            ]);
        }
        fits.push(fit);
    }
    create_dir(&args.out)?;
    let path = args.out.join("colorspace_fits.csv");
    write_fits_csv(
        File::create(&path).with_context(|| format!("writing {}", path.display()))?,
        &fits,
    )?;
    write_csv(
        &args.out.join("colorspace_predictions.csv"),
        &["concept", "color_index", "hex", "observed", "predicted"],
        &rows,
    )?;
    let fit_rs: Vec<f64> = fits.iter().filter_map(|f| f.fit_r).collect();
    Ok(summary(
        "fit-colorspace",
        json!({
            "out": args.out.display().to_string(),
            "concepts": fits.len(),
            "mean_fit_r": (!fit_rs.is_empty()).then(|| fit_rs.iter().sum::<f64>() / fit_rs.len() as f64),
        }),
    ))
}
