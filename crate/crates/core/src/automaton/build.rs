use std::collections::{HashMap, VecDeque};

use super::{ConstraintGraph, NodeWord};
use crate::constraint::{successors, ConstraintSet, Outcome, Strategy};
use crate::error::{Error, Result};

/// Largest word length `k⋆` accepted by [`build_graph`].
pub const DEFAULT_WORD_CAP: usize = 16;

/// Unminimized constraint graph of `cs`.
///
/// Nodes are the words of length `k⋆` reachable from the all-hit word, where
/// `k⋆` is the longest window among the constraints (row-miss counted as
/// `m + 1`). Words that cannot be continued forever are pruned.
pub fn build_graph(cs: &ConstraintSet) -> Result<ConstraintGraph> {
    build_graph_capped(cs, DEFAULT_WORD_CAP)
}

pub fn build_graph_capped(cs: &ConstraintSet, cap: usize) -> Result<ConstraintGraph> {
    let k = cs.word_length();
    if k > cap {
        return Err(Error::CapExceeded {
            what: "word length",
            value: k,
            cap,
        });
    }
    explore(cs.strategy(), k, |word| cs.admits_tail(word))
}

/// Breadth-first exploration of the word graph under an arbitrary
/// admissibility predicate on the newest window.
pub(crate) fn explore(
    strategy: Strategy,
    k: usize,
    admits: impl Fn(&[Outcome]) -> bool,
) -> Result<ConstraintGraph> {
    let start = vec![Outcome::Hit; k];
    let mut index: HashMap<Vec<Outcome>, usize> = HashMap::new();
    let mut words: Vec<Vec<Outcome>> = Vec::new();
    let mut succ: Vec<[Option<usize>; 3]> = Vec::new();
    let mut queue = VecDeque::new();

    index.insert(start.clone(), 0);
    words.push(start);
    succ.push([None; 3]);
    queue.push_back(0);

    // Extended history long enough for any window the predicate inspects.
    let mut history = Vec::with_capacity(k + 1);
    while let Some(v) = queue.pop_front() {
        let word = words[v].clone();
        let last = *word.last().unwrap_or(&Outcome::Hit);
        for &c in successors(last, strategy) {
            history.clear();
            history.extend_from_slice(&word);
            history.push(c);
            if !admits(&history) {
                continue;
            }
            let next = history[1..].to_vec();
            let target = match index.get(&next) {
                Some(&t) => t,
                None => {
                    let t = words.len();
                    index.insert(next.clone(), t);
                    words.push(next);
                    succ.push([None; 3]);
                    queue.push_back(t);
                    t
                }
            };
            succ[v][c.index()] = Some(target);
        }
    }

    let alive = prune_dead_ends(&succ);
    if !alive[0] {
        return Err(Error::EmptyLanguage);
    }
    let mut remap = vec![None; words.len()];
    let mut kept_words = Vec::new();
    for (old, word) in words.iter().enumerate() {
        if alive[old] {
            remap[old] = Some(kept_words.len());
            kept_words.push(NodeWord::from_outcomes(word));
        }
    }
    let kept_succ = succ
        .iter()
        .enumerate()
        .filter(|(old, _)| alive[*old])
        .map(|(_, row)| row.map(|t| t.and_then(|to| remap[to])))
        .collect();
    Ok(ConstraintGraph::from_parts(
        strategy, kept_words, kept_succ, 0,
    ))
}

/// Marks nodes lying on some infinite path.
fn prune_dead_ends(succ: &[[Option<usize>; 3]]) -> Vec<bool> {
    let mut alive = vec![true; succ.len()];
    loop {
        let mut changed = false;
        for v in 0..succ.len() {
            if alive[v] && !succ[v].iter().flatten().any(|&t| alive[t]) {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            return alive;
        }
    }
}
