//! Stability analysis of control loops whose jobs may miss deadlines under a
//! weakly-hard constraint.

pub mod analysis;
pub mod automaton;
pub mod constraint;
pub mod dominance;
pub mod dynamics;
pub mod error;
pub mod jsr;
pub mod lifting;
pub mod systems;

pub use analysis::{analyze, analyze_with, StabilityReport, Verdict};
pub use automaton::{build_graph, minimize, ConstraintGraph};
pub use constraint::{Constraint, ConstraintSet, Outcome, OutcomeString, Strategy};
pub use dominance::{dominant_set, dominates, Dominance};
pub use dynamics::{closed_loop_set, simulate, ActuatorMode, ClosedLoopSet, StateSpace};
pub use error::{Error, Result};
pub use jsr::{BoundEstimator, BoundParams, Bounds, EstimatorRegistry};
