use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use chrono::{SecondsFormat, Utc};
use rayon::prelude::*;

use super::backend::{ChatRequest, RatingBackend};
use super::parse::parse_rating;
use super::prompt::build_prompt;
use super::record::{values_by_color, AssociationDistribution, RatingKey, RatingRecord};
use super::retry::{RateLimiter, RetryPolicy};
use super::{EstimatorError, RatingProtocol};
use crate::colorlib::ColorLibrary;

pub const DEFAULT_CONCURRENCY: usize = 4;

/// Source of record timestamps.
pub trait Clock: Send + Sync {
    fn now(&self) -> String;
}

pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> String {
        Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
    }
}

/// Always returns the same instant; keeps offline runs byte-reproducible.
pub struct FixedClock(pub String);

impl Default for FixedClock {
    fn default() -> Self {
        FixedClock("1970-01-01T00:00:00.000Z".into())
    }
}

impl Clock for FixedClock {
    fn now(&self) -> String {
        self.0.clone()
    }
}

/// Receives each concept's records (sorted by color, repetition, attempt)
/// before the estimator reports success or failure.
pub trait RecordSink: Send + Sync {
    fn append(&self, records: &[RatingRecord]) -> std::io::Result<()>;
}

#[derive(Debug, Clone)]
pub struct Estimate {
    pub distribution: AssociationDistribution,
    /// Records produced by this call, excluding reused prior ones.
    pub records: Vec<RatingRecord>,
}

pub struct Estimator<'a> {
    backend: &'a dyn RatingBackend,
    retry: RetryPolicy,
    pool: rayon::ThreadPool,
    limiter: Option<Arc<RateLimiter>>,
    clock: Arc<dyn Clock>,
    sink: Option<&'a dyn RecordSink>,
}

struct TrialOutcome {
    records: Vec<RatingRecord>,
    fatal: Option<String>,
}

impl<'a> Estimator<'a> {
    pub fn new(backend: &'a dyn RatingBackend) -> Self {
        Estimator {
            backend,
            retry: RetryPolicy::default(),
            pool: build_pool(DEFAULT_CONCURRENCY),
            limiter: None,
            clock: Arc::new(SystemClock),
            sink: None,
        }
    }

    pub fn retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    /// Maximum number of requests in flight.
    pub fn concurrency(mut self, n: usize) -> Self {
        self.pool = build_pool(n.max(1));
        self
    }

    pub fn rate_limiter(mut self, limiter: Arc<RateLimiter>) -> Self {
        self.limiter = Some(limiter);
        self
    }

    pub fn clock(mut self, clock: Arc<dyn Clock>) -> Self {
        self.clock = clock;
        self
    }

    pub fn sink(mut self, sink: &'a dyn RecordSink) -> Self {
        self.sink = Some(sink);
        self
    }

    pub fn estimate_distribution(
        &self,
        protocol: &RatingProtocol,
        concept: &str,
        library: &ColorLibrary,
    ) -> Result<Estimate, EstimatorError> {
        self.estimate_with_prior(protocol, concept, library, &[])
    }

    /// Like [`estimate_distribution`](Self::estimate_distribution), but trials
    /// that already have a successful record in `prior` are not re-issued and
    /// those ratings enter the mean.
    pub fn estimate_with_prior(
        &self,
        protocol: &RatingProtocol,
        concept: &str,
        library: &ColorLibrary,
        prior: &[RatingRecord],
    ) -> Result<Estimate, EstimatorError> {
        protocol.validate()?;
        let prior: Vec<RatingRecord> = prior
            .iter()
            .filter(|r| {
                r.concept == concept && r.succeeded() && r.repetition < protocol.repetitions
            })
            .cloned()
            .collect();
        let done: HashSet<RatingKey> = prior.iter().map(RatingRecord::key).collect();

        let mut trials = Vec::new();
        for (pos, color) in library.colors.iter().enumerate() {
            let prompt = build_prompt(protocol, concept, &color.hex, library)?;
            for repetition in 0..protocol.repetitions {
                let key = RatingKey {
                    concept: concept.to_string(),
                    color_index: pos + 1,
                    repetition,
                };
                if !done.contains(&key) {
                    trials.push((key, color.hex.as_str(), prompt.clone()));
                }
            }
        }

        let abort = AtomicBool::new(false);
        let outcomes: Vec<TrialOutcome> = self.pool.install(|| {
            trials
                .par_iter()
                .map(|(key, hex, prompt)| {
                    if abort.load(Ordering::SeqCst) {
                        return TrialOutcome {
                            records: Vec::new(),
                            fatal: None,
                        };
                    }
                    let out = self.run_trial(protocol, key, hex, &prompt.system, &prompt.user);
                    if out.fatal.is_some() {
                        abort.store(true, Ordering::SeqCst);
                    }
                    out
                })
                .collect()
        });

        let mut fatal = None;
        let mut records = Vec::new();
        for o in outcomes {
            records.extend(o.records);
            if fatal.is_none() {
                fatal = o.fatal;
            }
        }
        if let Some(sink) = self.sink {
            sink.append(&records)
                .map_err(|e| EstimatorError::Sink(e.to_string()))?;
        }
        if let Some(message) = fatal {
            return Err(EstimatorError::Backend {
                concept: concept.to_string(),
                message,
            });
        }

        let all: Vec<RatingRecord> = prior.iter().chain(&records).cloned().collect();
        let per_color = values_by_color(&all, library.len());
        let failed: Vec<usize> = per_color
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_empty())
            .map(|(i, _)| i + 1)
            .collect();
        if !failed.is_empty() {
            return Err(EstimatorError::Incomplete {
                concept: concept.to_string(),
                color_indices: failed,
            });
        }
        let values = per_color
            .iter()
            .map(|v| v.iter().sum::<f64>() / v.len() as f64)
            .collect();
        Ok(Estimate {
            distribution: AssociationDistribution {
                concept: concept.to_string(),
                library_name: library.name.clone(),
                values,
                n_ratings_per_color: protocol.repetitions,
            },
            records,
        })
    }

    fn run_trial(
        &self,
        protocol: &RatingProtocol,
        key: &RatingKey,
        hex: &str,
        system: &str,
        user: &str,
    ) -> TrialOutcome {
        let mut records = Vec::new();
        let max_attempts = self.retry.max_attempts.max(1);
        for attempt in 1..=max_attempts {
            if let Some(l) = &self.limiter {
                l.acquire();
            }
            let request = ChatRequest {
                model: protocol.model_id.clone(),
                temperature: protocol.temperature,
                system: system.to_string(),
                user: user.to_string(),
                repetition: key.repetition,
                attempt,
            };
            let reply = self.backend.complete(&request);
            let mut record = RatingRecord {
                concept: key.concept.clone(),
                color_index: key.color_index,
                hex: hex.to_string(),
                repetition: key.repetition,
                raw_response: String::new(),
                parsed_value: None,
                attempts: attempt,
                protocol_name: protocol.name.to_string(),
                model_id: protocol.model_id.clone(),
                timestamp: self.clock.now(),
                error: None,
            };
            let retry = match reply {
                Ok(text) => {
                    match parse_rating(&text) {
                        Ok(v) => record.parsed_value = Some(v),
                        Err(e) => record.error = Some(format!("parse: {e}")),
                    }
                    record.raw_response = text;
                    record.parsed_value.is_none()
                }
                Err(e) => {
                    record.error = Some(e.to_string());
                    if !e.is_retryable() {
                        records.push(record);
                        return TrialOutcome {
                            records,
                            fatal: Some(e.to_string()),
                        };
                    }
                    true
                }
            };
            records.push(record);
            if !retry {
                break;
            }
            if attempt < max_attempts {
                std::thread::sleep(self.retry.backoff(attempt));
            }
        }
        TrialOutcome {
            records,
            fatal: None,
        }
    }
}

fn build_pool(n: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .expect("failed to start rating worker pool")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colorlib::load_uw71;
    use crate::estimator::mock::{uniform_ground_truth, GroundTruth, MockBackend, MockFault};
    use std::sync::Mutex;

    #[derive(Default)]
    struct VecSink(Mutex<Vec<RatingRecord>>);

    impl RecordSink for VecSink {
        fn append(&self, records: &[RatingRecord]) -> std::io::Result<()> {
            self.0.lock().unwrap().extend_from_slice(records);
            Ok(())
        }
    }

    fn fixed() -> Arc<dyn Clock> {
        Arc::new(FixedClock::default())
    }

    #[test]
    fn constant_backend_gives_constant_distribution() {
        let lib = load_uw71().unwrap();
        let m = MockBackend::constant(0.5);
        let est = Estimator::new(&m)
            .clock(fixed())
            .estimate_distribution(&RatingProtocol::single_deterministic("mock"), "apple", &lib)
            .unwrap();
        assert_eq!(est.distribution.values, vec![0.5; 71]);
        assert_eq!(est.records.len(), 71);
        assert_eq!(est.distribution.library_name, "UW-71");
        assert!(est
            .records
            .windows(2)
            .all(|w| w[0].color_index < w[1].color_index));
    }

    #[test]
    fn averaging_converges_to_truth() {
        let lib = load_uw71().unwrap();
        let truth = uniform_ground_truth(3, 0.2, 0.8);
        let sd = 0.1;
        let m = MockBackend::new(truth.clone(), sd, 11);
        let proto = RatingProtocol::stochastic_averaged("mock");
        let est = Estimator::new(&m)
            .clock(fixed())
            .estimate_distribution(&proto, "sky", &lib)
            .unwrap();
        assert_eq!(est.records.len(), 710);
        for (c, v) in lib.colors.iter().zip(&est.distribution.values) {
            let f = truth.eval("sky", &c.hex);
            assert!(
                (v - f).abs() <= 3.0 * sd / 10f64.sqrt() + 1e-3,
                "{} {v} {f}",
                c.hex
            );
        }
    }

    #[test]
    fn deterministic_protocol_is_idempotent_and_order_free() {
        let lib = load_uw71().unwrap();
        let m = MockBackend::new(uniform_ground_truth(1, 0.0, 1.0), 0.2, 5);
        let proto = RatingProtocol::anchored_deterministic("mock");
        let a = Estimator::new(&m).clock(fixed()).concurrency(1);
        let b = Estimator::new(&m).clock(fixed()).concurrency(8);
        let ea = a.estimate_distribution(&proto, "rose", &lib).unwrap();
        let eb = b.estimate_distribution(&proto, "rose", &lib).unwrap();
        assert_eq!(ea.distribution, eb.distribution);
        assert_eq!(ea.records, eb.records);
    }

    #[test]
    fn retries_parse_and_transport_failures() {
        let lib = load_uw71().unwrap();
        let m = MockBackend::constant(0.25).with_faults(|_, hex, req| match (hex, req.attempt) {
            ("#2F6EF6", 1) => Some(MockFault::Reply("not sure".into())),
            ("#3518AD", 1 | 2) => Some(MockFault::Transport),
            _ => None,
        });
        let sink = VecSink::default();
        let est = Estimator::new(&m)
            .retry(RetryPolicy::immediate(3))
            .clock(fixed())
            .sink(&sink)
            .estimate_distribution(&RatingProtocol::single_deterministic("mock"), "x", &lib)
            .unwrap();
        assert_eq!(est.distribution.values, vec![0.25; 71]);
        assert_eq!(est.records.len(), 71 + 1 + 2);
        assert_eq!(
            est.records[0].error.as_deref(),
            Some("parse: no numeric token in response")
        );
        assert_eq!(est.records[1].attempts, 2);
        assert_eq!(sink.0.lock().unwrap().len(), 74);
    }

    #[test]
    fn exhausted_retries_are_incomplete_and_persisted() {
        let lib = load_uw71().unwrap();
        let m = MockBackend::constant(0.25)
            .with_faults(|_, hex, _| (hex == "#FFFFFF").then(|| MockFault::Reply("1.5".into())));
        let sink = VecSink::default();
        let err = Estimator::new(&m)
            .retry(RetryPolicy::immediate(3))
            .clock(fixed())
            .sink(&sink)
            .estimate_distribution(&RatingProtocol::single_deterministic("mock"), "x", &lib)
            .unwrap_err();
        match err {
            EstimatorError::Incomplete { color_indices, .. } => assert_eq!(color_indices, vec![29]),
            e => panic!("{e}"),
        }
        let stored = sink.0.lock().unwrap();
        assert_eq!(stored.len(), 73);
        assert_eq!(
            stored.iter().filter(|r| r.parsed_value.is_none()).count(),
            3
        );
    }

    #[test]
    fn fatal_error_aborts() {
        let lib = load_uw71().unwrap();
        let m = MockBackend::constant(0.25).with_faults(|_, _, _| Some(MockFault::Fatal));
        let err = Estimator::new(&m)
            .clock(fixed())
            .concurrency(1)
            .estimate_distribution(&RatingProtocol::single_deterministic("mock"), "x", &lib)
            .unwrap_err();
        assert!(matches!(err, EstimatorError::Backend { .. }));
        assert!(m.calls() < 71);
    }

    #[test]
    fn prior_records_are_reused() {
        let lib = load_uw71().unwrap();
        let m = MockBackend::new(GroundTruth::Constant(0.4), 0.1, 2);
        let proto = RatingProtocol::stochastic_averaged("mock")
            .with_overrides(None, Some(3))
            .unwrap();
        let est = Estimator::new(&m).clock(fixed());
        let full = est.estimate_distribution(&proto, "c", &lib).unwrap();
        let partial: Vec<_> = full
            .records
            .iter()
            .filter(|r| r.color_index != 5)
            .cloned()
            .collect();
        let before = m.calls();
        let resumed = est
            .estimate_with_prior(&proto, "c", &lib, &partial)
            .unwrap();
        assert_eq!(m.calls() - before, 3);
        assert_eq!(resumed.records.len(), 3);
        assert_eq!(resumed.distribution, full.distribution);
    }
}
