//! End-to-end stability analysis: constraints to verdict.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::automaton::{build_graph, minimize};
use crate::constraint::{Constraint, ConstraintSet, Strategy};
use crate::dominance::dominant_set;
use crate::dynamics::{closed_loop_set, ActuatorMode, ClosedLoopSet, StateSpace};
use crate::error::Result;
use crate::jsr::{gripenberg, BoundEstimator, BoundParams, Bounds};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Unstable,
    Inconclusive,
}

impl Verdict {
    /// Strict comparisons against 1, no tolerance.
    pub fn from_bounds(b: &Bounds) -> Verdict {
        if b.ub < 1.0 {
            Verdict::Stable
        } else if b.lb > 1.0 {
            Verdict::Unstable
        } else {
            Verdict::Inconclusive
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Stable => "stable",
            Verdict::Unstable => "unstable",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    /// Constraints left after dropping dominated ones.
    pub dominant: Vec<Constraint>,
    pub nodes: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub verdict: Verdict,
    /// A bound lies within `delta` of 1.
    pub borderline: bool,
    pub strategy: Strategy,
    pub actuator: ActuatorMode,
    pub constraints: Vec<Constraint>,
    pub graph: GraphSummary,
    pub bounds: Bounds,
    pub walltime_ms: u64,
}

impl StabilityReport {
    pub fn summary(&self) -> String {
        let b = &self.bounds;
        let mut text = format!(
            "{}: lb = {:.6} (cycle {}), ub = {} [{} nodes, depth {}]",
            self.verdict,
            b.lb,
            b.lb_witness,
            if b.ub.is_finite() {
                format!("{:.6}", b.ub)
            } else {
                "inf".to_string()
            },
            self.graph.nodes,
            b.depth
        );
        if self.borderline {
            text.push_str("; borderline, a bound is within delta of 1");
        }
        if b.budget_exhausted {
            text.push_str("; budget exhausted");
        }
        text
    }
}

/// Runs the analysis with the default branch-and-bound estimator.
pub fn analyze(
    plant: &StateSpace,
    ctrl: &StateSpace,
    strategy: Strategy,
    mode: ActuatorMode,
    cs: &ConstraintSet,
    params: &BoundParams,
) -> Result<StabilityReport> {
    let cl = closed_loop_set(plant, ctrl, strategy, mode)?;
    analyze_closed_loop(&cl, cs, params, gripenberg)
}

pub fn analyze_with(
    estimator: &dyn BoundEstimator,
    plant: &StateSpace,
    ctrl: &StateSpace,
    strategy: Strategy,
    mode: ActuatorMode,
    cs: &ConstraintSet,
    params: &BoundParams,
) -> Result<StabilityReport> {
    let cl = closed_loop_set(plant, ctrl, strategy, mode)?;
    analyze_closed_loop(&cl, cs, params, |g, cl, p| estimator.estimate(g, cl, p))
}

/// Pipeline on an already assembled closed loop.
pub fn analyze_closed_loop(
    cl: &ClosedLoopSet,
    cs: &ConstraintSet,
    params: &BoundParams,
    estimate: impl FnOnce(&crate::ConstraintGraph, &ClosedLoopSet, &BoundParams) -> Result<Bounds>,
) -> Result<StabilityReport> {
    let started = Instant::now();
    params.validate()?;
    let cs = if cs.strategy() == cl.strategy() {
        cs.clone()
    } else {
        ConstraintSet::new(cs.constraints().to_vec(), cl.strategy())?
    };
    let dominant = dominant_set(&cs)?;
    let g = minimize(&build_graph(&dominant)?);
    let bounds = estimate(&g, cl, params)?;
    let verdict = Verdict::from_bounds(&bounds);
    let near = |v: f64| (v - 1.0).abs() < params.delta;
    Ok(StabilityReport {
        verdict,
        borderline: near(bounds.lb) || near(bounds.ub),
        strategy: cl.strategy(),
        actuator: cl.mode(),
        constraints: cs.constraints().to_vec(),
        graph: GraphSummary {
            dominant: dominant.constraints().to_vec(),
            nodes: g.node_count(),
            edges: g.edge_count(),
        },
        bounds,
        walltime_ms: started.elapsed().as_millis() as u64,
    })
}
