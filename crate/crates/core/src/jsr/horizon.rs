//! Fixed-horizon upper bound: the largest `‖A_α‖^{1/ℓ}` over all walks of
//! length `ℓ`, for the deepest `ℓ` the budget affords.

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{check_alphabet, lower_bound_cycles, spectral_norm, with_workers, BoundParams, Bounds};
use crate::automaton::ConstraintGraph;
use crate::dynamics::ClosedLoopSet;
use crate::error::Result;

pub const NAME: &str = "horizon";

/// Number of walks of each length `1..=max_len` summed over start nodes.
fn walk_counts(g: &ConstraintGraph, max_len: usize) -> Vec<u64> {
    let mut per_node = vec![1u64; g.node_count()];
    let mut counts = Vec::with_capacity(max_len);
    for _ in 0..max_len {
        // per_node[v]: walks of the current length ending at v.
        let mut next = vec![0u64; g.node_count()];
        for e in g.edges() {
            next[e.to] = next[e.to].saturating_add(per_node[e.from]);
        }
        counts.push(next.iter().fold(0u64, |a, &b| a.saturating_add(b)));
        per_node = next;
    }
    counts
}

pub fn horizon_bound(
    g: &ConstraintGraph,
    cl: &ClosedLoopSet,
    params: &BoundParams,
) -> Result<Bounds> {
    check_alphabet(g, cl)?;
    params.validate()?;
    let counts = walk_counts(g, params.max_depth);
    // Walks of every length up to the horizon are visited on the way down.
    let mut total = 0u64;
    let mut horizon = 1;
    for (i, &c) in counts.iter().enumerate() {
        total = total.saturating_add(c);
        if total > params.budget && i > 0 {
            break;
        }
        horizon = i + 1;
    }
    let explored = counts[..horizon].iter().sum();

    let dim = cl.dim();
    let per_start: Vec<Vec<f64>> = with_workers(|| {
        (0..g.node_count())
            .into_par_iter()
            .map(|v| {
                let mut widest = vec![0.0; horizon];
                descend(g, cl, v, &DMatrix::identity(dim, dim), 0, &mut widest);
                widest
            })
            .collect()
    });
    let ub = (0..horizon)
        .map(|i| {
            let widest = per_start.iter().map(|w| w[i]).fold(0.0, f64::max);
            widest.powf(1.0 / (i + 1) as f64)
        })
        .fold(f64::INFINITY, f64::min);

    let lb = lower_bound_cycles(g, cl, params.cycle_len)?;
    Ok(Bounds {
        lb: lb.value,
        ub: ub.max(lb.value),
        lb_witness: lb.witness,
        method: NAME.to_string(),
        params: *params,
        depth: horizon,
        explored,
        complete: false,
        budget_exhausted: horizon < params.max_depth,
    })
}

fn descend(
    g: &ConstraintGraph,
    cl: &ClosedLoopSet,
    node: usize,
    product: &DMatrix<f64>,
    len: usize,
    widest: &mut [f64],
) {
    for &c in g.strategy().alphabet() {
        let Some(next) = g.successor(node, c) else {
            continue;
        };
        let p = cl.matrix(c).expect("alphabets checked") * product;
        widest[len] = widest[len].max(spectral_norm(&p));
        if len + 1 < widest.len() {
            descend(g, cl, next, &p, len + 1, widest);
        }
    }
}
