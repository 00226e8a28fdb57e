//! Constraint domination decided by language inclusion of constraint graphs.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::automaton::{build_graph, minimize, ConstraintGraph};
use crate::constraint::ConstraintSet;
use crate::error::{Error, Result};

/// How the run language of a left-hand set relates to a right-hand one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    /// Every run of the left set satisfies the right set, but not conversely.
    StrictlyHarder,
    Equivalent,
    StrictlyEasier,
    Incomparable,
}

impl Dominance {
    pub fn as_str(self) -> &'static str {
        match self {
            Dominance::StrictlyHarder => "harder",
            Dominance::Equivalent => "equivalent",
            Dominance::StrictlyEasier => "easier",
            Dominance::Incomparable => "incomparable",
        }
    }

    /// `left ⪯ right`.
    pub fn is_at_least_as_hard(self) -> bool {
        matches!(self, Dominance::StrictlyHarder | Dominance::Equivalent)
    }
}

impl fmt::Display for Dominance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Whether every walk of `left` from its initial node is also a walk of
/// `right`. Explores the reachable product and fails as soon as `left`
/// offers a label that `right` lacks.
pub fn graph_included(left: &ConstraintGraph, right: &ConstraintGraph) -> bool {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([(left.initial(), right.initial())]);
    seen.insert((left.initial(), right.initial()));
    while let Some((a, b)) = queue.pop_front() {
        for &c in left.strategy().alphabet() {
            let Some(na) = left.successor(a, c) else {
                continue;
            };
            let Some(nb) = right.successor(b, c) else {
                return false;
            };
            if seen.insert((na, nb)) {
                queue.push_back((na, nb));
            }
        }
    }
    true
}

fn check_strategies(left: &ConstraintSet, right: &ConstraintSet) -> Result<()> {
    if left.strategy() != right.strategy() {
        return Err(Error::StrategyMismatch {
            left: left.strategy().to_string(),
            right: right.strategy().to_string(),
        });
    }
    Ok(())
}

fn relation(forward: bool, backward: bool) -> Dominance {
    match (forward, backward) {
        (true, true) => Dominance::Equivalent,
        (true, false) => Dominance::StrictlyHarder,
        (false, true) => Dominance::StrictlyEasier,
        (false, false) => Dominance::Incomparable,
    }
}

pub fn dominates(left: &ConstraintSet, right: &ConstraintSet) -> Result<Dominance> {
    check_strategies(left, right)?;
    let gl = minimize(&build_graph(left)?);
    let gr = minimize(&build_graph(right)?);
    Ok(relation(graph_included(&gl, &gr), graph_included(&gr, &gl)))
}

/// Keeps the hardest constraints of `cs`: a member is dropped when another
/// member is strictly harder, or equivalent and earlier in input order.
pub fn dominant_set(cs: &ConstraintSet) -> Result<ConstraintSet> {
    let graphs = cs
        .constraints()
        .iter()
        .map(|&c| build_graph(&ConstraintSet::single(c, cs.strategy())).map(|g| minimize(&g)))
        .collect::<Result<Vec<_>>>()?;
    let n = graphs.len();
    let included: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i == j || graph_included(&graphs[i], &graphs[j]))
                .collect()
        })
        .collect();
    let kept = (0..n)
        .filter(|&i| !(0..n).any(|j| j != i && included[j][i] && (!included[i][j] || j < i)))
        .map(|i| cs.constraints()[i])
        .collect();
    ConstraintSet::new(kept, cs.strategy())
}
