use super::{gripenberg, horizon_bound, lower_bound_cycles, BoundParams, Bounds};
use crate::automaton::ConstraintGraph;
use crate::dynamics::ClosedLoopSet;
use crate::error::{Error, Result};

/// An algorithm bracketing the constrained joint spectral radius.
pub trait BoundEstimator: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    fn estimate(
        &self,
        g: &ConstraintGraph,
        cl: &ClosedLoopSet,
        params: &BoundParams,
    ) -> Result<Bounds>;
}

pub struct GripenbergEstimator;

impl BoundEstimator for GripenbergEstimator {
    fn name(&self) -> &'static str {
        super::gripenberg::NAME
    }

    fn description(&self) -> &'static str {
        "branch and bound over graph walks; tight brackets"
    }

    fn estimate(
        &self,
        g: &ConstraintGraph,
        cl: &ClosedLoopSet,
        params: &BoundParams,
    ) -> Result<Bounds> {
        gripenberg(g, cl, params)
    }
}

/// Lower bound only; the upper bound is left infinite.
pub struct CyclesEstimator;

impl BoundEstimator for CyclesEstimator {
    fn name(&self) -> &'static str {
        "cycles"
    }

    fn description(&self) -> &'static str {
        "closed walks up to cycle_len; lower bound only"
    }

    fn estimate(
        &self,
        g: &ConstraintGraph,
        cl: &ClosedLoopSet,
        params: &BoundParams,
    ) -> Result<Bounds> {
        params.validate()?;
        let lb = lower_bound_cycles(g, cl, params.cycle_len)?;
        Ok(Bounds {
            lb: lb.value,
            ub: f64::INFINITY,
            lb_witness: lb.witness,
            method: self.name().to_string(),
            params: *params,
            depth: 0,
            explored: 0,
            complete: false,
            budget_exhausted: false,
        })
    }
}

pub struct HorizonEstimator;

impl BoundEstimator for HorizonEstimator {
    fn name(&self) -> &'static str {
        super::horizon::NAME
    }

    fn description(&self) -> &'static str {
        "all walks up to a fixed length, no pruning"
    }

    fn estimate(
        &self,
        g: &ConstraintGraph,
        cl: &ClosedLoopSet,
        params: &BoundParams,
    ) -> Result<Bounds> {
        horizon_bound(g, cl, params)
    }
}

/// Estimators selectable by name.
pub struct EstimatorRegistry {
    entries: Vec<Box<dyn BoundEstimator>>,
}

impl EstimatorRegistry {
    pub const DEFAULT_METHOD: &'static str = "gripenberg";

    pub fn empty() -> Self {
        EstimatorRegistry {
            entries: Vec::new(),
        }
    }

    /// Replaces any estimator registered under the same name.
    pub fn register(&mut self, estimator: Box<dyn BoundEstimator>) {
        self.entries.retain(|e| e.name() != estimator.name());
        self.entries.push(estimator);
    }

    pub fn get(&self, name: &str) -> Result<&dyn BoundEstimator> {
        let key = name.trim().to_ascii_lowercase();
        self.entries
            .iter()
            .find(|e| e.name() == key)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::UnknownEstimator {
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn BoundEstimator> {
        self.entries.iter().map(|e| e.as_ref())
    }
}

impl Default for EstimatorRegistry {
    fn default() -> Self {
        let mut r = EstimatorRegistry::empty();
        r.register(Box::new(GripenbergEstimator));
        r.register(Box::new(CyclesEstimator));
        r.register(Box::new(HorizonEstimator));
        r
    }
}
