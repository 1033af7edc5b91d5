use std::collections::BTreeMap;
use std::fs::File;
use std::sync::Arc;

use anyhow::{Context, Result};
use chroma_assoc::colorlib::write_library_csv;
use chroma_assoc::estimator::{
    Clock, Estimator, EstimatorError, FixedClock, ProtocolName, RateLimiter, RatingProtocol,
    RatingRecord, RetryPolicy, SystemClock,
};
use chroma_assoc::store::{
    read_cache, write_distribution_csv, RatingCache, RunManifest, TrialState,
};
use serde_json::json;

use super::{resolve_concepts, summary};
use crate::backend_spec::BackendSpec;
use crate::failure::{config, Failure};
use crate::rundir::{
    concept_stem, create_dir, distribution_path, load_library, load_run, CACHE, DISTRIBUTIONS,
    LIBRARY, MANIFEST,
};
use crate::EstimateArgs;

pub fn run(args: EstimateArgs) -> Result<String> {
    // Everything that can be rejected is checked before touching the disk.
    let name: ProtocolName = args
        .protocol
        .parse()
        .map_err(|e: EstimatorError| config(e.to_string()))?;
    let spec = BackendSpec::parse(&args.backend)?;
    let model = args
        .model
        .clone()
        .unwrap_or_else(|| if spec.is_mock() { "mock" } else { "gpt-4" }.to_string());
    let protocol = RatingProtocol::new(name, model)
        .with_overrides(args.temperature, args.repetitions)
        .map_err(|e| config(e.to_string()))?;
    let stochastic = protocol.temperature > 0.0 || spec.is_seeded();
    let seed = match (args.seed, stochastic) {
        (Some(s), _) => s,
        (None, false) => 0,
        (None, true) => {
            return Err(config(
                "--seed is required for stochastic protocols and seeded backends",
            ))
        }
    };
    if args.max_attempts == 0 || args.concurrency == 0 {
        return Err(config("--max-attempts and --concurrency must be positive"));
    }
    if let Some(r) = args.rate_limit {
        if !(r.is_finite() && r > 0.0) {
            return Err(config("--rate-limit must be positive"));
        }
    }
    let concepts = resolve_concepts(&args.concepts)?;
    let mut stems = BTreeMap::new();
    for c in &concepts {
        if let Some(prev) = stems.insert(concept_stem(c), c) {
            return Err(config(format!(
                "concepts {prev:?} and {c:?} map to the same file name"
            )));
        }
    }
    let library = load_library(&args.library)?;
    let backend = spec.build(&library, seed)?;
    let clock: Arc<dyn Clock> = if spec.is_mock() {
        Arc::new(FixedClock::default())
    } else {
        Arc::new(SystemClock)
    };

    let out = &args.out;
    let manifest_path = out.join(MANIFEST);
    let run_seed = stochastic.then_some(seed);
    let mut manifest = if manifest_path.exists() {
        let m = RunManifest::load(&manifest_path)?;
        if m.protocol != protocol
            || m.library_name != library.name
            || m.n_colors != library.len()
            || m.concepts != concepts
            || m.seed != run_seed
        {
            return Err(config(format!(
                "{} holds a different run; choose another --out",
                out.display()
            )));
        }
        m
    } else {
        RunManifest::new(
            protocol.clone(),
            library.name.clone(),
            library.len(),
            concepts.clone(),
            run_seed,
            clock.now(),
        )
    };

    create_dir(&out.join(DISTRIBUTIONS))?;
    let lib_path = out.join(LIBRARY);
    let lib_file =
        File::create(&lib_path).with_context(|| format!("writing {}", lib_path.display()))?;
    write_library_csv(&library, lib_file)?;
    manifest.save(&manifest_path)?;

    let cache_path = out.join(CACHE);
    let prior = read_cache(&cache_path)?;
    manifest.check_records(&prior)?;
    let mut prior_by_concept: BTreeMap<&str, Vec<RatingRecord>> = BTreeMap::new();
    for r in &prior {
        prior_by_concept
            .entry(r.concept.as_str())
            .or_default()
            .push(r.clone());
    }
    let cache = RatingCache::open(&cache_path)?;

    let retry = if spec.is_mock() {
        RetryPolicy::immediate(args.max_attempts)
    } else {
        RetryPolicy {
            max_attempts: args.max_attempts,
            ..RetryPolicy::default()
        }
    };
    let mut estimator = Estimator::new(backend.as_ref())
        .retry(retry)
        .concurrency(args.concurrency)
        .clock(clock.clone())
        .sink(&cache);
    if let Some(rate) = args.rate_limit {
        estimator = estimator.rate_limiter(Arc::new(RateLimiter::new(rate, args.concurrency)));
    }

    let mut new_records = 0;
    for concept in &concepts {
        let prior = prior_by_concept
            .get(concept.as_str())
            .map_or(&[][..], Vec::as_slice);
        let result = estimator.estimate_with_prior(&protocol, concept, &library, prior);
        match result {
            Ok(est) => {
                new_records += est.records.len();
                manifest.apply_records(&est.records, clock.now());
                manifest.save(&manifest_path)?;
                let path = distribution_path(out, concept);
                let f =
                    File::create(&path).with_context(|| format!("writing {}", path.display()))?;
                write_distribution_csv(f, &est.distribution, &library)?;
                log::info!("{concept}: {} new records", est.records.len());
            }
            Err(e) => {
                // The estimator has already appended this concept's records.
                let fresh: Vec<RatingRecord> = read_cache(&cache_path)?
                    .into_iter()
                    .filter(|r| &r.concept == concept)
                    .collect();
                manifest.apply_records(&fresh, clock.now());
                manifest.save(&manifest_path)?;
                return Err(match e {
                    EstimatorError::Incomplete { .. } | EstimatorError::Backend { .. } => {
                        Failure::Backend(e.to_string()).into()
                    }
                    other => anyhow::Error::new(other),
                });
            }
        }
    }

    let loaded = load_run(out)?;
    if loaded.distributions.len() != concepts.len() {
        anyhow::bail!("run in {} failed validation after writing", out.display());
    }
    Ok(summary(
        "estimate",
        json!({
            "out": out.display().to_string(),
            "protocol": protocol.name.as_str(),
            "concepts": concepts.len(),
            "new_records": new_records,
            "total_records": prior.len() + new_records,
            "failed_trials": loaded.manifest.count(TrialState::Failed),
        }),
    ))
}
