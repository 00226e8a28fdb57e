use std::collections::HashSet;

use nalgebra::DMatrix;

use super::{check_alphabet, norm_upper_estimate, spectral_radius, Candidate};
use crate::automaton::ConstraintGraph;
use crate::constraint::{Outcome, OutcomeString};
use crate::dynamics::ClosedLoopSet;
use crate::error::{Error, Result};

/// Best periodic value `ρ(A_α)^{1/|α|}` over closed walks `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleBound {
    pub value: f64,
    pub witness: OutcomeString,
}

/// Whether `word` is the least of its rotations and not a power of a
/// shorter word. Each cyclic class is then visited once.
pub(crate) fn is_canonical_cycle(word: &[Outcome]) -> bool {
    let n = word.len();
    (1..n).all(|r| {
        let rotated = word[r..].iter().chain(&word[..r]);
        rotated.cmp(word.iter()) == std::cmp::Ordering::Greater
    })
}

/// Lower bound from every closed walk of length at most `max_len`.
///
/// Any closed walk can be repeated forever, so its periodic growth rate is
/// attained by a feasible switching sequence.
pub fn lower_bound_cycles(
    g: &ConstraintGraph,
    cl: &ClosedLoopSet,
    max_len: usize,
) -> Result<CycleBound> {
    check_alphabet(g, cl)?;
    if max_len == 0 {
        return Err(Error::InvalidParameter("max_len must be at least 1".into()));
    }
    let mut best = Candidate::none();
    let mut seen = HashSet::new();
    let identity = DMatrix::identity(cl.dim(), cl.dim());
    for start in 0..g.node_count() {
        let mut word = Vec::with_capacity(max_len);
        walk(
            g, cl, start, start, &identity, &mut word, max_len, &mut best, &mut seen,
        )?;
    }
    Ok(CycleBound {
        value: best.value,
        witness: OutcomeString(best.word),
    })
}

#[allow(clippy::too_many_arguments)]
fn walk(
    g: &ConstraintGraph,
    cl: &ClosedLoopSet,
    start: usize,
    node: usize,
    product: &DMatrix<f64>,
    word: &mut Vec<Outcome>,
    max_len: usize,
    best: &mut Candidate,
    seen: &mut HashSet<Vec<Outcome>>,
) -> Result<()> {
    for &c in g.strategy().alphabet() {
        let Some(next) = g.successor(node, c) else {
            continue;
        };
        let a = cl.matrix(c).expect("alphabets checked");
        let p = a * product;
        word.push(c);
        if next == start && is_canonical_cycle(word) && !seen.contains(word.as_slice()) {
            let len = word.len() as f64;
            if norm_upper_estimate(&p).powf(1.0 / len) >= best.value {
                let value = spectral_radius(&p)?.powf(1.0 / len);
                let candidate = Candidate {
                    value,
                    word: word.clone(),
                };
                *best = std::mem::replace(best, Candidate::none()).best(candidate);
            }
            seen.insert(word.clone());
        }
        if word.len() < max_len {
            walk(g, cl, start, next, &p, word, max_len, best, seen)?;
        }
        word.pop();
    }
    Ok(())
}
