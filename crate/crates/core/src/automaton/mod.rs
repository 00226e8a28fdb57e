//! Constraint graphs: deterministic safety automata whose nodes are the last
//! `k⋆` outcomes of a run and whose edges append one outcome.

mod build;
mod export;
mod matrix;
mod minimize;

use std::cmp::Ordering;
use std::fmt;

use crate::constraint::{Outcome, OutcomeString, Strategy};

pub use build::{build_graph, build_graph_capped, DEFAULT_WORD_CAP};
pub use export::{export_dot, GraphDocument};
pub use matrix::{step_gstate, transition_matrix, GState, TransitionMatrix};
pub use minimize::minimize;

/// One position of a node label: a set of outcomes. Singletons print as
/// `H`/`M`/`R`, `{H, R}` as `T` and anything else as the wildcard `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Symbol(u8);

impl Symbol {
    pub fn of(outcome: Outcome) -> Self {
        Symbol(1 << outcome.index())
    }

    pub fn union(self, other: Symbol) -> Symbol {
        Symbol(self.0 | other.0)
    }

    pub fn contains(self, outcome: Outcome) -> bool {
        self.0 & (1 << outcome.index()) != 0
    }

    pub fn as_char(self) -> char {
        match self.0 {
            0b001 => 'H',
            0b010 => 'M',
            0b100 => 'R',
            0b101 => 'T',
            _ => 'X',
        }
    }

    fn rank(self) -> u8 {
        match self.as_char() {
            'X' => 0,
            'T' => 1,
            'H' => 2,
            'M' => 3,
            _ => 4,
        }
    }
}

/// Node label: one [`Symbol`] per remembered period, oldest first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeWord(Vec<Symbol>);

impl NodeWord {
    pub fn from_outcomes(word: &[Outcome]) -> Self {
        NodeWord(word.iter().copied().map(Symbol::of).collect())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Position-wise union of two labels of equal length.
    pub fn merge(&self, other: &NodeWord) -> NodeWord {
        NodeWord(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.union(*b))
                .collect(),
        )
    }

    /// Canonical order: position by position with `X < T < H < M < R`.
    pub fn canonical_cmp(&self, other: &NodeWord) -> Ordering {
        self.0
            .iter()
            .map(|s| s.rank())
            .cmp(other.0.iter().map(|s| s.rank()))
    }
}

impl fmt::Display for NodeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub label: Outcome,
    pub to: usize,
}

/// Deterministic constraint graph with the initial node at index 0.
///
/// Every node is reachable from the initial node and has at least one
/// outgoing edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintGraph {
    strategy: Strategy,
    nodes: Vec<NodeWord>,
    /// `succ[v][c.index()]`
    succ: Vec<[Option<usize>; 3]>,
    initial: usize,
}

impl ConstraintGraph {
    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn nodes(&self) -> &[NodeWord] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn successor(&self, node: usize, label: Outcome) -> Option<usize> {
        self.succ[node][label.index()]
    }

    /// Edges ordered by source node, then by label `H < M < R`.
    pub fn edges(&self) -> Vec<Edge> {
        let mut edges = Vec::new();
        for (from, row) in self.succ.iter().enumerate() {
            for &label in self.strategy.alphabet() {
                if let Some(to) = row[label.index()] {
                    edges.push(Edge { from, label, to });
                }
            }
        }
        edges
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().flatten().filter(|s| s.is_some()).count()
    }

    /// Word length `k⋆` of the node labels.
    pub fn word_length(&self) -> usize {
        self.nodes.first().map_or(0, NodeWord::len)
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.nodes.iter().position(|w| w.to_string() == label)
    }

    /// Node reached by walking `seq` from `start`, or `None` if the walk
    /// leaves the graph.
    pub fn walk_from(&self, start: usize, seq: &[Outcome]) -> Option<usize> {
        seq.iter()
            .try_fold(start, |node, &c| self.successor(node, c))
    }

    /// Builds a graph from raw parts and puts it in canonical node order.
    fn from_parts(
        strategy: Strategy,
        nodes: Vec<NodeWord>,
        succ: Vec<[Option<usize>; 3]>,
        initial: usize,
    ) -> Self {
        let mut order: Vec<usize> = (0..nodes.len()).filter(|&i| i != initial).collect();
        order.sort_by(|&a, &b| nodes[a].canonical_cmp(&nodes[b]).then(a.cmp(&b)));
        order.insert(0, initial);
        let mut position = vec![0; nodes.len()];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let nodes_sorted = order.iter().map(|&old| nodes[old].clone()).collect();
        let succ_sorted = order
            .iter()
            .map(|&old| succ[old].map(|t| t.map(|to| position[to])))
            .collect();
        ConstraintGraph {
            strategy,
            nodes: nodes_sorted,
            succ: succ_sorted,
            initial: 0,
        }
    }
}

/// Whether the walk from the initial node following `seq` stays in the graph.
pub fn is_feasible(g: &ConstraintGraph, seq: &OutcomeString) -> bool {
    g.walk_from(g.initial(), seq.symbols()).is_some()
}
