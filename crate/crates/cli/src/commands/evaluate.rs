use std::collections::BTreeMap;
use std::fs::File;
use std::path::Path;

use anyhow::{Context, Result};
use chroma_assoc::estimator::{AssociationDistribution, RatingRecord};
use chroma_assoc::metrics::{
    cohort_specificities, learning_curve, paired_t_test, significance_threshold,
    split_half_reliability, write_evaluations_csv, ConceptEvaluation, HumanRatingSet, MetricsError,
    ShuffleConfig,
};
use chroma_assoc::numfmt::{opt_sig6, sig6};
use chroma_assoc::seed::derive_seed;
use chroma_assoc::store::{load_concreteness, load_human_ratings, read_cache, ConcretenessNorms};
use serde_json::{json, Value};

use super::{require_same_concepts, summary};
use crate::failure::{config, input};
use crate::rundir::{create_dir, load_run, write_csv, write_file, Run, CACHE};
use crate::svg::{grouped_bar_chart, Series};
use crate::EvaluateArgs;

const RUN_COLOR: &str = "#222222";
const COMPARE_COLOR: &str = "#9a9a9a";
const BASELINE_COLOR: &str = "#1b9e8a";

struct Reference {
    means: BTreeMap<String, Vec<f64>>,
    human: Option<BTreeMap<String, HumanRatingSet>>,
}

pub fn run(args: EvaluateArgs) -> Result<String> {
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(config("--alpha must be in (0, 1)"));
    }
    let run = load_run(&args.run)?;
    let reference = match (&args.human, &args.reference_run) {
        (Some(path), _) => {
            let seed_missing = args.seed.is_none();
            if seed_missing {
                return Err(config(
                    "--seed is required with --human (split-half resampling)",
                ));
            }
            load_human(path, &run)?
        }
        (None, Some(dir)) => {
            let other = load_run(dir)?;
            require_same_library(&run, &other)?;
            require_same_concepts("run and reference run", &run.concepts(), &other.concepts())?;
            Reference {
                means: other
                    .distributions
                    .into_iter()
                    .map(|(k, d)| (k, d.values))
                    .collect(),
                human: None,
            }
        }
        (None, None) => return Err(config("either --human or --reference-run is required")),
    };
    let compare = match &args.compare {
        Some(dir) => {
            let other = load_run(dir)?;
            require_same_library(&run, &other)?;
            require_same_concepts("run and --compare run", &run.concepts(), &other.concepts())?;
            Some(other)
        }
        None => None,
    };
    let concreteness = match &args.concreteness {
        Some(p) => Some(load_concreteness(p).with_context(|| format!("reading {}", p.display()))?),
        None => None,
    };

    let concepts = run.concepts();
    let threshold = significance_threshold(args.alpha, concepts.len(), run.library.len())?;
    let split_half: BTreeMap<String, f64> = match (&reference.human, args.seed) {
        (Some(sets), Some(seed)) => concepts
            .iter()
            .filter_map(|c| {
                let set = &sets[c];
                if set.n_participants() < 2 {
                    log::warn!("{c}: fewer than 2 participants, no split-half reliability");
                    return None;
                }
                let r =
                    split_half_reliability(set, args.split_half_iterations, derive_seed(seed, c));
                Some(
                    r.map(|r| (c.clone(), r))
                        .with_context(|| format!("split-half for {c:?}")),
                )
            })
            .collect::<Result<_>>()?,
        _ => BTreeMap::new(),
    };

    let (evals, skipped) = evaluate(
        &run,
        &reference.means,
        threshold,
        &split_half,
        concreteness.as_ref(),
    )?;
    let compare_evals = match &compare {
        Some(c) => Some(evaluate(
            c,
            &reference.means,
            threshold,
            &split_half,
            concreteness.as_ref(),
        )?),
        None => None,
    };

    create_dir(&args.out)?;
    write_evaluations(&args.out.join("evaluation.csv"), &evals)?;
    if let Some((ce, _)) = &compare_evals {
        write_evaluations(&args.out.join("evaluation_compare.csv"), ce)?;
    }

    let run_r: BTreeMap<&str, f64> = evals
        .iter()
        .map(|e| (e.concept.as_str(), e.pearson_r))
        .collect();
    let compare_r: Option<BTreeMap<&str, f64>> = compare_evals.as_ref().map(|(ce, _)| {
        ce.iter()
            .map(|e| (e.concept.as_str(), e.pearson_r))
            .collect()
    });

    // Chart data and chart share one table.
    let table: Vec<Vec<String>> = concepts
        .iter()
        .map(|c| {
            vec![
                c.clone(),
                opt_sig6(run_r.get(c.as_str()).copied()),
                opt_sig6(compare_r.as_ref().and_then(|m| m.get(c.as_str()).copied())),
                opt_sig6(split_half.get(c).copied()),
            ]
        })
        .collect();
    write_csv(
        &args.out.join("correlations.csv"),
        &["concept", "run_r", "compare_r", "split_half_r"],
        &table,
    )?;
    let mut series = vec![Series {
        label: "run",
        color: RUN_COLOR,
        values: concepts
            .iter()
            .map(|c| run_r.get(c.as_str()).copied())
            .collect(),
    }];
    if let Some(m) = &compare_r {
        series.push(Series {
            label: "compare",
            color: COMPARE_COLOR,
            values: concepts
                .iter()
                .map(|c| m.get(c.as_str()).copied())
                .collect(),
        });
    }
    let baseline: Vec<Option<f64>> = concepts
        .iter()
        .map(|c| split_half.get(c).copied())
        .collect();
    let svg = grouped_bar_chart(
        "Correlation with reference ratings per concept",
        &concepts,
        &series,
        (!split_half.is_empty()).then_some((BASELINE_COLOR, baseline.as_slice())),
    );
    write_file(&args.out.join("correlations.svg"), svg)?;

    let paired = json!({
        "run_vs_split_half": paired_summary(&run_r, &split_half.iter().map(|(k, v)| (k.as_str(), *v)).collect()),
        "run_vs_compare": compare_r.as_ref().map(|m| paired_summary(&run_r, m)),
    });
    write_file(
        &args.out.join("paired_t.json"),
        serde_json::to_string_pretty(&paired)? + "\n",
    )?;

    let mut curve_written = false;
    if let (Some(sets), Some(seed)) = (&reference.human, args.seed) {
        if run.manifest.protocol.repetitions > 1 {
            write_learning_curves(&run, sets, seed, args.learning_rounds, &args.out)?;
            curve_written = true;
        }
    }

    let n_sig = evals.iter().filter(|e| e.significant).count();
    let mean_r = evals.iter().map(|e| e.pearson_r).sum::<f64>() / evals.len().max(1) as f64;
    Ok(summary(
        "evaluate",
        json!({
            "out": args.out.display().to_string(),
            "concepts": evals.len(),
            "significant": n_sig,
            "critical_r": threshold,
            "mean_r": mean_r,
            "skipped": skipped,
            "learning_curve": curve_written,
        }),
    ))
}

fn load_human(path: &Path, run: &Run) -> Result<Reference> {
    if !path.exists() {
        return Err(input(format!(
            "human ratings file {} not found",
            path.display()
        )));
    }
    let loaded = load_human_ratings(path, &run.library)
        .map_err(|e| input(format!("{}: {e}", path.display())))?;
    if !loaded.rejected.is_empty() {
        log::warn!(
            "{} incomplete participant/concept pairs rejected",
            loaded.rejected.len()
        );
    }
    let missing: Vec<&String> = run
        .distributions
        .keys()
        .filter(|c| !loaded.sets.contains_key(*c))
        .collect();
    if !missing.is_empty() {
        return Err(input(format!(
            "concept sets differ: run concepts {missing:?} have no human ratings in {}",
            path.display()
        )));
    }
    Ok(Reference {
        means: loaded
            .sets
            .iter()
            .map(|(k, s)| (k.clone(), s.mean_ratings()))
            .collect(),
        human: Some(loaded.sets),
    })
}

fn require_same_library(a: &Run, b: &Run) -> Result<()> {
    if a.library.hexes() != b.library.hexes() {
        return Err(input(format!(
            "{} and {} use different color libraries",
            a.dir.display(),
            b.dir.display()
        )));
    }
    Ok(())
}

fn evaluate(
    run: &Run,
    means: &BTreeMap<String, Vec<f64>>,
    threshold: f64,
    split_half: &BTreeMap<String, f64>,
    concreteness: Option<&ConcretenessNorms>,
) -> Result<(Vec<ConceptEvaluation>, Vec<String>)> {
    let dists: Vec<&AssociationDistribution> = run.distributions.values().collect();
    let spec: Vec<Option<f64>> = match cohort_specificities(
        &dists
            .iter()
            .map(|d| d.values.as_slice())
            .collect::<Vec<_>>(),
    ) {
        Ok(s) => s.into_iter().map(Some).collect(),
        Err(e) => {
            log::warn!("specificity unavailable for {}: {e}", run.dir.display());
            vec![None; dists.len()]
        }
    };
    let mut out = Vec::new();
    let mut skipped = Vec::new();
    for (d, s) in dists.into_iter().zip(spec) {
        match ConceptEvaluation::assess(&d.concept, &d.values, &means[&d.concept], threshold) {
            Ok(mut e) => {
                e.split_half_r = split_half.get(&d.concept).copied();
                e.specificity = s;
                e.concreteness = concreteness.and_then(|n| n.lookup(&d.concept));
                out.push(e);
            }
            Err(MetricsError::UndefinedCorrelation) => {
                log::warn!("{}: constant ratings, correlation undefined", d.concept);
                skipped.push(d.concept.clone());
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok((out, skipped))
}

fn write_evaluations(path: &Path, rows: &[ConceptEvaluation]) -> Result<()> {
    let f = File::create(path).with_context(|| format!("writing {}", path.display()))?;
    write_evaluations_csv(f, rows)?;
    Ok(())
}

fn paired_summary(a: &BTreeMap<&str, f64>, b: &BTreeMap<&str, f64>) -> Value {
    let common: Vec<&str> = a.keys().filter(|k| b.contains_key(*k)).copied().collect();
    let xa: Vec<f64> = common.iter().map(|k| a[k]).collect();
    let xb: Vec<f64> = common.iter().map(|k| b[k]).collect();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len().max(1) as f64;
    match paired_t_test(&xa, &xb) {
        Ok(t) => json!({
            "n_concepts": common.len(),
            "mean_a": mean(&xa),
            "mean_b": mean(&xb),
            "mean_difference": t.mean_difference,
            "t": t.t,
            "df": t.df,
            "p": t.p,
        }),
        Err(e) => json!({"n_concepts": common.len(), "error": e.to_string()}),
    }
}

fn write_learning_curves(
    run: &Run,
    sets: &BTreeMap<String, HumanRatingSet>,
    seed: u64,
    rounds: usize,
    out: &Path,
) -> Result<()> {
    let max_k = run.manifest.protocol.repetitions;
    let records = read_cache(&run.dir.join(CACHE))?;
    let mut by_concept: BTreeMap<&str, Vec<RatingRecord>> = BTreeMap::new();
    for r in &records {
        by_concept
            .entry(r.concept.as_str())
            .or_default()
            .push(r.clone());
    }
    let mut rows = Vec::new();
    let mut sums = vec![0.0; max_k];
    let mut n = 0usize;
    for concept in run.distributions.keys() {
        let recs = by_concept
            .get(concept.as_str())
            .map_or(&[][..], Vec::as_slice);
        let shuffle = (rounds > 0).then_some(ShuffleConfig {
            seed: derive_seed(seed, &format!("learning|{concept}")),
            rounds,
        });
        match learning_curve(recs, &sets[concept].mean_ratings(), max_k, shuffle) {
            Ok(curve) => {
                for (k, r) in curve.iter().enumerate() {
                    rows.push(vec![concept.clone(), (k + 1).to_string(), sig6(*r)]);
                    sums[k] += r;
                }
                n += 1;
            }
            Err(e) => log::warn!("{concept}: no learning curve: {e}"),
        }
    }
    if n > 0 {
        for (k, s) in sums.iter().enumerate() {
            rows.push(vec![
                "mean".to_string(),
                (k + 1).to_string(),
                sig6(s / n as f64),
            ]);
        }
    }
    write_csv(
        &out.join("learning_curve.csv"),
        &["concept", "k", "r"],
        &rows,
    )
}
