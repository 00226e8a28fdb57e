//! Bounds on the constrained joint spectral radius of a closed loop whose
//! switching is restricted to the walks of a constraint graph.

mod cycles;
mod gripenberg;
mod horizon;
mod linalg;
mod registry;

use std::cmp::Ordering;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::automaton::ConstraintGraph;
use crate::constraint::{Outcome, OutcomeString};
use crate::dynamics::ClosedLoopSet;
use crate::error::{Error, Result};

pub use cycles::{lower_bound_cycles, CycleBound};
pub use gripenberg::gripenberg;
pub use horizon::horizon_bound;
pub(crate) use linalg::norm_upper_estimate;
pub use linalg::{spectral_norm, spectral_radius};
pub use registry::{
    BoundEstimator, CyclesEstimator, EstimatorRegistry, GripenbergEstimator, HorizonEstimator,
};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "WHSTAB_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundParams {
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_max_depth")]
    pub max_depth: usize,
    /// Maximum number of walk products computed by the upper-bound search.
    #[serde(default = "default_budget")]
    pub budget: u64,
    /// Longest closed walk tried for the lower bound.
    #[serde(default = "default_cycle_len")]
    pub cycle_len: usize,
}

fn default_delta() -> f64 {
    0.01
}

fn default_max_depth() -> usize {
    30
}

fn default_budget() -> u64 {
    5_000_000
}

fn default_cycle_len() -> usize {
    10
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams {
            delta: default_delta(),
            max_depth: default_max_depth(),
            budget: default_budget(),
            cycle_len: default_cycle_len(),
        }
    }
}

impl BoundParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "delta must be positive and finite, got {}",
                self.delta
            )));
        }
        if self.max_depth == 0 {
            return Err(Error::InvalidParameter(
                "max_depth must be at least 1".into(),
            ));
        }
        if self.cycle_len == 0 {
            return Err(Error::InvalidParameter(
                "cycle_len must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// A bracket `lb ≤ ρ ≤ ub`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lb: f64,
    /// `None` in JSON when no finite upper bound was found.
    #[serde(with = "infinite_as_null")]
    pub ub: f64,
    /// Closed walk whose periodic repetition attains `lb`.
    pub lb_witness: OutcomeString,
    pub method: String,
    pub params: BoundParams,
    /// Longest walk length fully examined by the upper-bound search.
    pub depth: usize,
    /// Walk products computed.
    pub explored: u64,
    /// The search proved `ub - lb ≤ delta`.
    pub complete: bool,
    pub budget_exhausted: bool,
}

impl Bounds {
    pub fn gap(&self) -> f64 {
        self.ub - self.lb
    }
}

mod infinite_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

pub(crate) fn check_alphabet(g: &ConstraintGraph, cl: &ClosedLoopSet) -> Result<()> {
    if g.strategy() != cl.strategy() {
        return Err(Error::AlphabetMismatch(format!(
            "graph uses the {} alphabet but the closed loop uses {}",
            g.strategy(),
            cl.strategy()
        )));
    }
    Ok(())
}

/// Closed-walk candidate for the lower bound.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Candidate {
    pub value: f64,
    pub word: Vec<Outcome>,
}

impl Candidate {
    pub fn none() -> Self {
        Candidate {
            value: 0.0,
            word: Vec::new(),
        }
    }

    /// Larger value first, then the shorter word, then the smaller word.
    pub fn rank(&self, other: &Candidate) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then_with(|| other.word.len().cmp(&self.word.len()))
            .then_with(|| other.word.cmp(&self.word))
    }

    pub fn best(self, other: Candidate) -> Candidate {
        if other.rank(&self) == Ordering::Greater {
            other
        } else {
            self
        }
    }
}

/// Runs `f` on a pool limited by [`THREADS_ENV`] when it is set.
pub(crate) fn with_workers<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    static POOL: OnceLock<Option<rayon::ThreadPool>> = OnceLock::new();
    let pool = POOL.get_or_init(|| {
        let n = std::env::var(THREADS_ENV)
            .ok()?
            .trim()
            .parse::<usize>()
            .ok()?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .ok()
    });
    match pool {
        Some(p) => p.install(f),
        None => f(),
    }
}
