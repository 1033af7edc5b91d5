use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::backend::{BackendError, Capabilities, ChatRequest, RatingBackend};
use super::prompt::parse_trial_prompt;
use crate::colorlib::ColorLibrary;
use crate::colorspace::{delta_e_76, LabColor};
use crate::seed::{derive_seed, rng_for};

pub type TruthFn = dyn Fn(&str, &str) -> f64 + Send + Sync;

/// Noise-free association for a (concept, hex) pair.
#[derive(Clone)]
pub enum GroundTruth {
    Constant(f64),
    Function(Arc<TruthFn>),
}

impl GroundTruth {
    pub fn function(f: impl Fn(&str, &str) -> f64 + Send + Sync + 'static) -> Self {
        GroundTruth::Function(Arc::new(f))
    }

    pub fn eval(&self, concept: &str, hex: &str) -> f64 {
        match self {
            GroundTruth::Constant(v) => *v,
            GroundTruth::Function(f) => f(concept, hex),
        }
    }
}

impl fmt::Debug for GroundTruth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundTruth::Constant(v) => write!(f, "Constant({v})"),
            GroundTruth::Function(_) => f.write_str("Function"),
        }
    }
}

/// Injected misbehavior for exercising retries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MockFault {
    Transport,
    Fatal,
    Reply(String),
}

pub type FaultFn = dyn Fn(&str, &str, &ChatRequest) -> Option<MockFault> + Send + Sync;

/// Offline backend answering `truth + N(0, noise_sd · temperature)`, clamped
/// to [0, 1] and printed with three decimals. The noise stream is keyed by
/// (seed, concept, hex, repetition, attempt), so responses do not depend on
/// call order.
#[derive(Clone)]
pub struct MockBackend {
    truth: GroundTruth,
    noise_sd: f64,
    seed: u64,
    faults: Option<Arc<FaultFn>>,
    calls: Arc<AtomicUsize>,
}

impl MockBackend {
    pub fn new(truth: GroundTruth, noise_sd: f64, seed: u64) -> Self {
        assert!(
            noise_sd >= 0.0 && noise_sd.is_finite(),
            "noise_sd must be >= 0"
        );
        MockBackend {
            truth,
            noise_sd,
            seed,
            faults: None,
            calls: Arc::new(AtomicUsize::new(0)),
        }
    }

    pub fn constant(value: f64) -> Self {
        Self::new(GroundTruth::Constant(value), 0.0, 0)
    }

    pub fn with_faults(
        mut self,
        f: impl Fn(&str, &str, &ChatRequest) -> Option<MockFault> + Send + Sync + 'static,
    ) -> Self {
        self.faults = Some(Arc::new(f));
        self
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }

    pub fn truth(&self) -> &GroundTruth {
        &self.truth
    }
}

impl RatingBackend for MockBackend {
    fn capabilities(&self) -> Capabilities {
        Capabilities {
            supports_temperature: true,
            deterministic_at_zero: true,
        }
    }

    fn complete(&self, req: &ChatRequest) -> Result<String, BackendError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        let (concept, hex) = parse_trial_prompt(&req.user).ok_or_else(|| {
            BackendError::ProtocolViolation("prompt does not match the rating template".into())
        })?;
        if let Some(fault) = self.faults.as_ref().and_then(|f| f(&concept, &hex, req)) {
            return match fault {
                MockFault::Transport => Err(BackendError::Transport("injected".into())),
                MockFault::Fatal => Err(BackendError::Fatal("injected".into())),
                MockFault::Reply(s) => Ok(s),
            };
        }
        let mut value = self.truth.eval(&concept, &hex);
        let sd = self.noise_sd * req.temperature;
        if sd > 0.0 {
            let label = format!("{concept}|{hex}|{}|{}", req.repetition, req.attempt);
            let mut rng = rng_for(self.seed, &label);
            value += Normal::new(0.0, sd)
                .map_err(|e| BackendError::Fatal(e.to_string()))?
                .sample(&mut rng);
        }
        Ok(format!("{:.3}", value.clamp(0.0, 1.0)))
    }
}

/// Smooth synthetic associations over `library`: each concept gets a few
/// random CIELAB focal colors and rates a color by its distance to the
/// nearest one. Hexes outside the library rate 0.
pub fn synthetic_ground_truth(library: &ColorLibrary, seed: u64) -> GroundTruth {
    let labs: HashMap<String, LabColor> = library
        .colors
        .iter()
        .map(|c| (c.hex.clone(), c.lab))
        .collect();
    let foci_pool: Vec<LabColor> = library.colors.iter().map(|c| c.lab).collect();
    GroundTruth::function(move |concept, hex| {
        let Some(lab) = labs.get(hex) else {
            return 0.0;
        };
        let mut rng = rng_for(seed, concept);
        let n_foci = rng.random_range(1..=3);
        let width = rng.random_range(20.0..60.0);
        let floor = rng.random_range(0.0..0.2);
        let peak = rng.random_range(0.7..1.0);
        let nearest = (0..n_foci)
            .map(|_| foci_pool[rng.random_range(0..foci_pool.len())])
            .map(|f| delta_e_76(*lab, f))
            .fold(f64::INFINITY, f64::min);
        floor + (peak - floor) * (-0.5 * (nearest / width).powi(2)).exp()
    })
}

/// Ground truth independent uniform draws in `[low, high]` per
/// (concept, hex).
pub fn uniform_ground_truth(seed: u64, low: f64, high: f64) -> GroundTruth {
    GroundTruth::function(move |concept, hex| {
        let mut rng = rng_for(derive_seed(seed, concept), hex);
        rng.random_range(low..=high)
    })
}
