use std::collections::HashMap;

use super::{ConstraintGraph, NodeWord};

/// Minimal deterministic graph accepting the same walks as `g`.
///
/// Moore-style partition refinement starting from a single block (every
/// state of a safety automaton is accepting); blocks split whenever two
/// members disagree on the block reached, or on whether an edge exists, for
/// some label. Merged nodes are labelled with the position-wise union of
/// their words.
pub fn minimize(g: &ConstraintGraph) -> ConstraintGraph {
    let n = g.node_count();
    let mut block = vec![0usize; n];
    let mut blocks = 1;
    loop {
        let mut ids: HashMap<(usize, [Option<usize>; 3]), usize> = HashMap::new();
        let mut next = vec![0usize; n];
        for v in 0..n {
            let signature = (block[v], g.succ[v].map(|t| t.map(|to| block[to])));
            let fresh = ids.len();
            next[v] = *ids.entry(signature).or_insert(fresh);
        }
        let count = ids.len();
        block = next;
        if count == blocks {
            break;
        }
        blocks = count;
    }

    let mut labels: Vec<Option<NodeWord>> = vec![None; blocks];
    let mut succ = vec![[None; 3]; blocks];
    for v in 0..n {
        let b = block[v];
        labels[b] = Some(match labels[b].take() {
            Some(label) => label.merge(&g.nodes[v]),
            None => g.nodes[v].clone(),
        });
        succ[b] = g.succ[v].map(|t| t.map(|to| block[to]));
    }
    let labels = labels
        .into_iter()
        .map(|l| l.expect("every block has a member"))
        .collect();
    ConstraintGraph::from_parts(g.strategy, labels, succ, block[g.initial])
}
