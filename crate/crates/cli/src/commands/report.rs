use anyhow::Result;
use chroma_assoc::metrics::cohort_specificities;
use chroma_assoc::numfmt::sig6;
use serde_json::json;

use super::summary;
use crate::failure::input;
use crate::rundir::{concept_stem, create_dir, load_run, read_evaluation_r, write_csv, write_file};
use crate::svg::{distribution_chart, scatter};
use crate::ReportArgs;

pub fn run(args: ReportArgs) -> Result<String> {
    let run = load_run(&args.run)?;
    let evaluation = match &args.evaluation {
        Some(p) => Some(read_evaluation_r(p)?),
        None => None,
    };
    create_dir(&args.out)?;
    for (concept, dist) in &run.distributions {
        let stem = concept_stem(concept);
        let bars: Vec<(&str, f64)> = run
            .library
            .colors
            .iter()
            .zip(&dist.values)
            .map(|(c, v)| (c.hex.as_str(), *v))
            .collect();
        write_file(
            &args.out.join(format!("{stem}.svg")),
            distribution_chart(concept, &bars),
        )?;
        let rows: Vec<Vec<String>> = bars
            .iter()
            .enumerate()
            .map(|(i, (hex, v))| vec![(i + 1).to_string(), hex.to_string(), sig6(*v)])
            .collect();
        write_csv(
            &args.out.join(format!("{stem}.csv")),
            &["color_index", "hex", "value"],
            &rows,
        )?;
    }

    let mut scatter_written = false;
    if let Some(eval) = &evaluation {
        let values: Vec<&[f64]> = run
            .distributions
            .values()
            .map(|d| d.values.as_slice())
            .collect();
        let specs = cohort_specificities(&values)
            .map_err(|e| input(format!("specificity scatter needs a varied cohort: {e}")))?;
        let mut points = Vec::new();
        for (concept, s) in run.distributions.keys().zip(specs) {
            if let Some(r) = eval.get(concept) {
                points.push((concept.clone(), s, *r));
            }
        }
        let rows: Vec<Vec<String>> = points
            .iter()
            .map(|(c, s, r)| vec![c.clone(), sig6(*s), sig6(*r)])
            .collect();
        write_csv(
            &args.out.join("specificity_vs_correlation.csv"),
            &["concept", "specificity", "pearson_r"],
            &rows,
        )?;
        write_file(
            &args.out.join("specificity_vs_correlation.svg"),
            scatter(
                "Specificity vs correlation",
                "specificity",
                "pearson r",
                &points,
            ),
        )?;
        scatter_written = true;
    }
    Ok(summary(
        "report",
        json!({
            "out": args.out.display().to_string(),
            "charts": run.distributions.len(),
            "scatter": scatter_written,
        }),
    ))
}
