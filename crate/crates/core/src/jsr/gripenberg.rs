//! Branch-and-bound upper bound over graph walks.
//!
//! Walks are grown from every node. A walk `α` is pruned once
//! `‖A_α‖^{1/|α|} ≤ t`, where `t` is the seed lower bound plus `delta`.
//! If every walk of length `D` that survived pruning has
//! `‖A_α‖^{1/D} ≤ u`, then any infinite walk splits into pieces each
//! bounded by `max(t, u)`, so that value bounds the radius. The search
//! deepens `D` one step at a time and keeps the best such bound.
//!
//! The threshold is fixed before the search starts and per-level results
//! are merged with order-independent reductions, so the output does not
//! depend on the number of worker threads.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering as AtomicOrdering};

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{
    check_alphabet, lower_bound_cycles, norm_upper_estimate, spectral_norm, spectral_radius,
    with_workers, BoundParams, Bounds, Candidate,
};
use crate::automaton::ConstraintGraph;
use crate::constraint::{Outcome, OutcomeString};
use crate::dynamics::ClosedLoopSet;
use crate::error::Result;

/// Live walks needed before the search fans out across workers.
const PARALLEL_SEEDS: usize = 512;

pub const NAME: &str = "gripenberg";

struct Prefix {
    start: usize,
    end: usize,
    word: Vec<Outcome>,
    product: DMatrix<f64>,
}

/// Summary of all walks of one exact length.
struct Level {
    count: u64,
    live: u64,
    frontier: f64,
    best: Candidate,
}

impl Level {
    fn empty() -> Self {
        Level {
            count: 0,
            live: 0,
            frontier: 0.0,
            best: Candidate::none(),
        }
    }

    fn merge(self, other: Level) -> Level {
        Level {
            count: self.count + other.count,
            live: self.live + other.live,
            frontier: self.frontier.max(other.frontier),
            best: self.best.best(other.best),
        }
    }
}

struct Search<'a> {
    g: &'a ConstraintGraph,
    cl: &'a ClosedLoopSet,
    threshold: f64,
}

impl Search<'_> {
    /// `None` when the walk is pruned, else its normalized norm.
    fn live_value(&self, p: &DMatrix<f64>, len: usize) -> Option<f64> {
        let root = 1.0 / len as f64;
        if norm_upper_estimate(p).powf(root) <= self.threshold {
            return None;
        }
        let v = spectral_norm(p).powf(root);
        (v > self.threshold).then_some(v)
    }

    /// Periodic value of a closed walk, skipped when it cannot reach `floor`.
    fn cycle(&self, word: &[Outcome], p: &DMatrix<f64>, floor: f64) -> Result<Option<Candidate>> {
        let root = 1.0 / word.len() as f64;
        if norm_upper_estimate(p).powf(root) < floor {
            return Ok(None);
        }
        Ok(Some(Candidate {
            value: spectral_radius(p)?.powf(root),
            word: word.to_vec(),
        }))
    }

    /// Examines every walk extending `prefix` up to length `limit`, keeping
    /// statistics for the walks of length exactly `limit`.
    fn deepen(&self, prefix: &Prefix, limit: usize, shared: &Shared) -> Result<Level> {
        let mut level = Level::empty();
        let mut word = prefix.word.clone();
        self.descend(
            prefix.start,
            prefix.end,
            &prefix.product,
            &mut word,
            limit,
            shared,
            &mut level,
        )?;
        Ok(level)
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        start: usize,
        node: usize,
        product: &DMatrix<f64>,
        word: &mut Vec<Outcome>,
        limit: usize,
        shared: &Shared,
        level: &mut Level,
    ) -> Result<()> {
        for &c in self.g.strategy().alphabet() {
            if shared.abort.load(AtomicOrdering::Relaxed) {
                return Ok(());
            }
            let Some(next) = self.g.successor(node, c) else {
                continue;
            };
            if shared.spent.fetch_add(1, AtomicOrdering::Relaxed) >= shared.allowance {
                shared.abort.store(true, AtomicOrdering::Relaxed);
                return Ok(());
            }
            level.count += 1;
            let p = self.cl.matrix(c).expect("alphabets checked") * product;
            word.push(c);
            let len = word.len();
            if len == limit && next == start {
                let floor = f64::from_bits(shared.floor.load(AtomicOrdering::Relaxed));
                if let Some(cand) = self.cycle(word, &p, floor)? {
                    shared
                        .floor
                        .fetch_max(cand.value.to_bits(), AtomicOrdering::Relaxed);
                    level.best = std::mem::replace(&mut level.best, Candidate::none()).best(cand);
                }
            }
            if let Some(v) = self.live_value(&p, len) {
                if len == limit {
                    level.live += 1;
                    level.frontier = level.frontier.max(v);
                } else {
                    self.descend(start, next, &p, word, limit, shared, level)?;
                }
            }
            word.pop();
        }
        Ok(())
    }
}

struct Shared {
    spent: AtomicU64,
    allowance: u64,
    abort: AtomicBool,
    /// Bits of the best cycle value seen so far; non-negative floats order
    /// like their bit patterns.
    floor: AtomicU64,
}

pub fn gripenberg(g: &ConstraintGraph, cl: &ClosedLoopSet, params: &BoundParams) -> Result<Bounds> {
    check_alphabet(g, cl)?;
    params.validate()?;
    let seed = lower_bound_cycles(g, cl, params.cycle_len)?;
    let search = Search {
        g,
        cl,
        threshold: seed.value + params.delta,
    };
    let mut best = Candidate {
        value: seed.value,
        word: seed.witness.0,
    };
    let mut ub = f64::INFINITY;
    let mut explored = 0u64;
    let mut depth = 0;
    let mut complete = false;
    let mut budget_exhausted = false;

    let dim = cl.dim();
    let mut frontier: Vec<Prefix> = (0..g.node_count())
        .map(|v| Prefix {
            start: v,
            end: v,
            word: Vec::new(),
            product: DMatrix::identity(dim, dim),
        })
        .collect();

    // Breadth-first until there are enough live walks to share out.
    while depth < params.max_depth && frontier.len() < PARALLEL_SEEDS {
        let len = depth + 1;
        let mut next = Vec::new();
        let mut widest = 0.0f64;
        for prefix in &frontier {
            for &c in g.strategy().alphabet() {
                let Some(to) = g.successor(prefix.end, c) else {
                    continue;
                };
                if explored >= params.budget {
                    budget_exhausted = true;
                    break;
                }
                explored += 1;
                let p = cl.matrix(c).expect("alphabets checked") * &prefix.product;
                let mut word = prefix.word.clone();
                word.push(c);
                if to == prefix.start {
                    if let Some(cand) = search.cycle(&word, &p, best.value)? {
                        best = best.best(cand);
                    }
                }
                if let Some(v) = search.live_value(&p, len) {
                    widest = widest.max(v);
                    next.push(Prefix {
                        start: prefix.start,
                        end: to,
                        word,
                        product: p,
                    });
                }
            }
            if budget_exhausted {
                break;
            }
        }
        if budget_exhausted {
            break;
        }
        depth = len;
        ub = ub.min(widest.max(search.threshold));
        frontier = next;
        if frontier.is_empty() {
            complete = true;
            break;
        }
    }

    // Iterative deepening from the live walks, in parallel.
    let seed_depth = depth;
    if !complete && !budget_exhausted {
        for limit in seed_depth + 1..=params.max_depth {
            let shared = Shared {
                spent: AtomicU64::new(0),
                allowance: params.budget.saturating_sub(explored),
                abort: AtomicBool::new(false),
                floor: AtomicU64::new(best.value.to_bits()),
            };
            let level = with_workers(|| {
                frontier
                    .par_iter()
                    .map(|prefix| search.deepen(prefix, limit, &shared))
                    .try_reduce(Level::empty, |a, b| Ok(a.merge(b)))
            })?;
            if shared.abort.load(AtomicOrdering::Relaxed) {
                budget_exhausted = true;
                break;
            }
            explored += level.count;
            depth = limit;
            best = best.best(level.best);
            ub = ub.min(level.frontier.max(search.threshold));
            if level.live == 0 {
                complete = true;
                break;
            }
        }
    }

    Ok(Bounds {
        lb: best.value,
        ub: ub.max(best.value),
        lb_witness: OutcomeString(best.word),
        method: NAME.to_string(),
        params: *params,
        depth,
        explored,
        complete,
        budget_exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{build_graph, minimize};
    use crate::constraint::{Constraint, ConstraintSet, Strategy};
    use crate::dynamics::ActuatorMode;
    use approx::assert_relative_eq;

    fn scalar(h: f64, m: f64) -> ClosedLoopSet {
        ClosedLoopSet::from_matrices(
            Strategy::Kill,
            ActuatorMode::Zero,
            vec![
                DMatrix::from_element(1, 1, h),
                DMatrix::from_element(1, 1, m),
            ],
        )
        .unwrap()
    }

    fn graph(c: &str) -> ConstraintGraph {
        let cs = ConstraintSet::single(c.parse::<Constraint>().unwrap(), Strategy::Kill);
        minimize(&build_graph(&cs).unwrap())
    }

    #[test]
    fn scalar_example_closes_the_gap() {
        let params = BoundParams {
            delta: 1e-4,
            ..BoundParams::default()
        };
        let b = gripenberg(&graph("anymiss(1,3)"), &scalar(0.5, 2.0), &params).unwrap();
        let exact = 2f64.powf(-1.0 / 3.0);
        assert_relative_eq!(b.lb, exact, epsilon = 1e-12);
        assert!(b.ub >= b.lb && b.ub - b.lb <= 1e-4 + 1e-12);
        assert!(b.complete);
    }

    #[test]
    fn singleton_matrix() {
        let a = DMatrix::from_row_slice(2, 2, &[0.5, 1.0, 0.0, 0.6]);
        let cl = ClosedLoopSet::from_matrices(
            Strategy::Kill,
            ActuatorMode::Zero,
            vec![a, DMatrix::zeros(2, 2)],
        )
        .unwrap();
        let params = BoundParams {
            delta: 0.05,
            max_depth: 200,
            ..BoundParams::default()
        };
        let b = gripenberg(&graph("anymiss(0,1)"), &cl, &params).unwrap();
        assert_relative_eq!(b.lb, 0.6, epsilon = 1e-12);
        assert!(b.complete && b.ub <= 0.65 + 1e-12);
    }

    #[test]
    fn tiny_budget_is_reported() {
        let params = BoundParams {
            budget: 3,
            ..BoundParams::default()
        };
        let b = gripenberg(&graph("anymiss(1,3)"), &scalar(0.9, 1.5), &params).unwrap();
        assert!(b.budget_exhausted);
        assert!(b.ub >= b.lb);
    }
}
