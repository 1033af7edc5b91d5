use anyhow::{Context, Result};
use chroma_assoc::metrics::{entropy, regress, specificity};
use chroma_assoc::numfmt::{opt_sig6, sig6};
use chroma_assoc::store::load_concreteness;
use serde_json::json;

use super::summary;
use crate::failure::input;
use crate::rundir::{create_dir, load_run, read_evaluation_r, write_csv, write_file};
use crate::SpecificityArgs;

pub fn run(args: SpecificityArgs) -> Result<String> {
    let run = load_run(&args.run)?;
    let evaluation = match &args.evaluation {
        Some(p) => Some(read_evaluation_r(p)?),
        None => None,
    };
    let norms = match &args.concreteness {
        Some(p) => Some(load_concreteness(p).with_context(|| format!("reading {}", p.display()))?),
        None => None,
    };
    let concepts = run.concepts();
    let entropies = run
        .distributions
        .values()
        .map(|d| entropy(&d.values).with_context(|| format!("entropy of {:?}", d.concept)))
        .collect::<Result<Vec<_>>>()?;
    let specs = run
        .distributions
        .values()
        .map(|d| specificity(&d.values, &entropies))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| {
            input(format!(
                "specificity needs at least two concepts with different entropies: {e}"
            ))
        })?;

    let mut rows = Vec::new();
    // Concepts with every regression variable present.
    let (mut conc_x, mut spec_x, mut resp) = (Vec::new(), Vec::new(), Vec::new());
    for ((c, h), s) in concepts.iter().zip(&entropies).zip(&specs) {
        let r = evaluation.as_ref().and_then(|m| m.get(c).copied());
        let k = norms.as_ref().and_then(|n| n.lookup(c));
        rows.push(vec![
            c.clone(),
            sig6(*h),
            sig6(*s),
            opt_sig6(r),
            opt_sig6(k),
        ]);
        if let (Some(r), Some(k)) = (r, k) {
            conc_x.push(k);
            spec_x.push(*s);
            resp.push(r);
        }
    }
    create_dir(&args.out)?;
    write_csv(
        &args.out.join("specificity.csv"),
        &[
            "concept",
            "entropy",
            "specificity",
            "pearson_r",
            "concreteness",
        ],
        &rows,
    )?;

    let mut regression_written = false;
    if evaluation.is_some() && norms.is_some() {
        let fit = regress(
            &[
                ("concreteness".to_string(), conc_x),
                ("specificity".to_string(), spec_x),
            ],
            &resp,
        )
        .map_err(|e| {
            input(format!(
                "regression of pearson_r on concreteness and specificity: {e}"
            ))
        })?;
        write_file(
            &args.out.join("regression.json"),
            serde_json::to_string_pretty(&fit)? + "\n",
        )?;
        regression_written = true;
    }
    Ok(summary(
        "specificity",
        json!({
            "out": args.out.display().to_string(),
            "concepts": concepts.len(),
            "regression": regression_written,
        }),
    ))
}
