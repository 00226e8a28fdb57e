//! Property checks used both by the acceptance gate (fixed seeds) and by
//! the randomized suite. Each returns a description of the first violation.

use std::collections::{HashMap, HashSet};

use nalgebra::DMatrix;
use whstab_core::automaton::{build_graph, minimize, transition_matrix, ConstraintGraph};
use whstab_core::constraint::{
    enumerate_satisfaction_set, Constraint, ConstraintSet, Outcome, Strategy,
};
use whstab_core::dominance::{dominates, graph_included};
use whstab_core::dynamics::{closed_loop_set, ActuatorMode, ClosedLoopSet};
use whstab_core::lifting::{block_column_norm, kron, lift};

use super::{all_strings, random_system, text, universe, LiveOracle};

pub type Check = Result<(), String>;

fn graph_of(cs: &[Constraint], strategy: Strategy) -> ConstraintGraph {
    let set = ConstraintSet::new(cs.to_vec(), strategy).unwrap();
    minimize(&build_graph(&set).unwrap())
}

/// Walks of length `n` from the initial node.
pub fn graph_strings(g: &ConstraintGraph, n: usize) -> Vec<Vec<Outcome>> {
    all_strings(g.strategy(), n)
        .into_iter()
        .filter(|w| g.walk_from(g.initial(), w).is_some())
        .collect()
}

fn has_row_hit(cs: &[Constraint]) -> bool {
    cs.iter().any(|c| matches!(c, Constraint::RowHit { .. }))
}

/// Minimization is idempotent and the graph accepts exactly the live
/// strings; without row-hit constraints that is the full satisfaction set.
pub fn language_preservation(cs: &[Constraint], strategy: Strategy, max_n: usize) -> Check {
    let set = ConstraintSet::new(cs.to_vec(), strategy).unwrap();
    let oracle = LiveOracle::new(cs, strategy);
    let raw = match build_graph(&set) {
        Ok(g) => g,
        Err(e) => {
            return if oracle.is_empty() {
                Ok(())
            } else {
                Err(format!(
                    "{set}: graph failed with {e} but the language is not empty"
                ))
            }
        }
    };
    let g = minimize(&raw);
    if minimize(&g) != g {
        return Err(format!("{set}: minimization is not a fixed point"));
    }
    for n in 0..=max_n {
        let walks = graph_strings(&g, n);
        let expected = oracle.strings(n);
        if walks != expected {
            return Err(format!(
                "{set}: {} walks of length {n}, oracle has {}",
                walks.len(),
                expected.len()
            ));
        }
        if graph_strings(&raw, n) != walks {
            return Err(format!(
                "{set}: raw and minimized graphs differ at length {n}"
            ));
        }
        if !has_row_hit(cs) {
            let enumerated: Vec<Vec<Outcome>> = enumerate_satisfaction_set(&set, n)
                .unwrap()
                .into_iter()
                .map(|s| s.0)
                .collect();
            if enumerated != walks {
                return Err(format!("{set}: enumeration and graph differ at length {n}"));
            }
        }
    }
    Ok(())
}

/// Library dominance against inclusion of live strings of length `n`.
pub fn dominance_matches_enumeration(strategy: Strategy, n: usize) -> Check {
    let all = universe();
    let live: Vec<HashSet<Vec<Outcome>>> = all
        .iter()
        .map(|c| {
            LiveOracle::new(&[*c], strategy)
                .strings(n)
                .into_iter()
                .collect()
        })
        .collect();
    for (i, a) in all.iter().enumerate() {
        for (j, b) in all.iter().enumerate() {
            let left = ConstraintSet::single(*a, strategy);
            let right = ConstraintSet::single(*b, strategy);
            let lib = dominates(&left, &right).map_err(|e| e.to_string())?;
            let forward = live[i].is_subset(&live[j]);
            let backward = live[j].is_subset(&live[i]);
            if lib.is_at_least_as_hard() != forward
                || dominates(&right, &left).unwrap().is_at_least_as_hard() != backward
            {
                return Err(format!(
                    "{a} vs {b} under {strategy}: library says {lib}, enumeration says {forward}/{backward}"
                ));
            }
        }
    }
    Ok(())
}

/// `rowmiss(m)` and `anymiss(m, m+1)` accept the same sequences.
pub fn row_miss_equivalence(strategy: Strategy) -> Check {
    for m in 1..=3 {
        let row = Constraint::row_miss(m, None).unwrap();
        let any = Constraint::any_miss(m, m + 1).unwrap();
        let rel = dominates(
            &ConstraintSet::single(row, strategy),
            &ConstraintSet::single(any, strategy),
        )
        .map_err(|e| e.to_string())?;
        if rel.as_str() != "equivalent" {
            return Err(format!("{row} vs {any} under {strategy}: {rel}"));
        }
        for n in 0..=12 {
            let a = LiveOracle::new(&[row], strategy).strings(n);
            let b = LiveOracle::new(&[any], strategy).strings(n);
            if a != b {
                return Err(format!("{row} and {any} differ at length {n}"));
            }
        }
    }
    Ok(())
}

/// Norm of every live string of length `1..=max_len`, keyed by the string.
fn live_norms(
    oracle: &LiveOracle,
    cl: &ClosedLoopSet,
    max_len: usize,
) -> HashMap<Vec<Outcome>, f64> {
    let mut out = HashMap::new();
    for l in 1..=max_len {
        for w in oracle.strings(l) {
            let v = cl
                .product(&w)
                .unwrap()
                .singular_values()
                .max()
                .powf(1.0 / l as f64);
            out.insert(w, v);
        }
    }
    out
}

fn per_length_max(
    norms: &HashMap<Vec<Outcome>, f64>,
    strings: impl Iterator<Item = Vec<Outcome>>,
    max_len: usize,
) -> Vec<f64> {
    let mut best = vec![0.0f64; max_len + 1];
    for w in strings {
        best[w.len()] = best[w.len()].max(norms[&w]);
    }
    best
}

/// Finite-horizon monotonicity of the constrained growth rate: a harder
/// constraint never has a larger `max ‖A_α‖^{1/ℓ}`, and neither does a set
/// compared to any of its members.
pub fn monotone_growth(seed: u64, strategy: Strategy, mode: ActuatorMode, max_len: usize) -> Check {
    let (plant, ctrl) = random_system(seed);
    let cl = closed_loop_set(&plant, &ctrl, strategy, mode).unwrap();
    let all = universe();
    let oracles: Vec<LiveOracle> = all
        .iter()
        .map(|c| LiveOracle::new(&[*c], strategy))
        .collect();
    let norms: Vec<_> = oracles
        .iter()
        .map(|o| live_norms(o, &cl, max_len))
        .collect();
    let maxima: Vec<Vec<f64>> = norms
        .iter()
        .map(|n| per_length_max(n, n.keys().cloned(), max_len))
        .collect();
    let graphs: Vec<_> = all.iter().map(|c| graph_of(&[*c], strategy)).collect();
    let tol = 1e-12;
    for i in 0..all.len() {
        for j in 0..all.len() {
            if graph_included(&graphs[i], &graphs[j]) {
                for l in 1..=max_len {
                    if maxima[i][l] > maxima[j][l] * (1.0 + tol) + tol {
                        return Err(format!(
                            "seed {seed}: {} harder than {} but length-{l} growth {} > {}",
                            all[i], all[j], maxima[i][l], maxima[j][l]
                        ));
                    }
                }
            }
            if j <= i {
                continue;
            }
            let both = LiveOracle::new(&[all[i], all[j]], strategy);
            let strings = (1..=max_len).flat_map(|l| both.strings(l));
            let set_max = per_length_max(&norms[i], strings, max_len);
            for l in 1..=max_len {
                let cap = maxima[i][l].min(maxima[j][l]);
                if set_max[l] > cap * (1.0 + tol) + tol {
                    return Err(format!(
                        "seed {seed}: {{{}, {}}} has length-{l} growth {} above member bound {cap}",
                        all[i], all[j], set_max[l]
                    ));
                }
            }
        }
    }
    Ok(())
}

fn f_product(g: &ConstraintGraph, w: &[Outcome]) -> DMatrix<f64> {
    let n = g.node_count();
    w.iter().fold(DMatrix::identity(n, n), |acc, &c| {
        transition_matrix(g, c).to_dense() * acc
    })
}

/// `P_α = F_α ⊗ A_α`, and the block-column norm of `P_α` equals `‖A_α‖`
/// for walkable `α` and 0 otherwise.
pub fn lifting_identities(cs: &[Constraint], cl: &ClosedLoopSet, max_len: usize) -> Check {
    let g = graph_of(cs, cl.strategy());
    let ls = lift(&g, cl).map_err(|e| e.to_string())?;
    for l in 1..=max_len {
        let mut lifted_max = 0.0f64;
        let mut walk_max = 0.0f64;
        for w in all_strings(cl.strategy(), l) {
            let p = ls.product(&w).unwrap();
            let f = f_product(&g, &w);
            let a = cl.product(&w).unwrap();
            let expected = kron(&f, &a);
            let scale = 1.0 + expected.amax();
            if (&p - &expected).amax() > 1e-12 * scale {
                return Err(format!("{}: mixed product fails for {}", cs[0], text(&w)));
            }
            let bcn = block_column_norm(&p, cl.dim()).unwrap();
            let walkable = (0..g.node_count()).any(|v| g.walk_from(v, &w).is_some());
            let norm = a.singular_values().max();
            let want = if walkable { norm } else { 0.0 };
            if (bcn - want).abs() > 1e-10 * (1.0 + want) {
                return Err(format!(
                    "{}: block-column norm {bcn} vs {want} for {}",
                    cs[0],
                    text(&w)
                ));
            }
            lifted_max = lifted_max.max(bcn.powf(1.0 / l as f64));
            if walkable {
                walk_max = walk_max.max(norm.powf(1.0 / l as f64));
            }
        }
        if (lifted_max - walk_max).abs() > 1e-10 {
            return Err(format!(
                "length {l}: lifted {lifted_max} vs walks {walk_max}"
            ));
        }
    }
    Ok(())
}

/// Every recovery is first or directly follows a miss.
pub fn rule_one_holds(w: &[Outcome]) -> bool {
    w.iter()
        .enumerate()
        .all(|(i, &o)| o != Outcome::Recovery || i == 0 || w[i - 1] == Outcome::Miss)
}
