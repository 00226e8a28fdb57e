use nalgebra::{DMatrix, DVector};

use super::ConstraintGraph;
use crate::constraint::Outcome;
use crate::error::{Error, Result};

/// 0/1 transition matrix of one label: entry `(i, j)` is 1 iff the graph has
/// an edge from node `j` to node `i` with that label. Each column holds at
/// most one 1, so the matrix is stored as the target of each column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    label: Outcome,
    targets: Vec<Option<usize>>,
}

impl TransitionMatrix {
    pub fn label(&self) -> Outcome {
        self.label
    }

    pub fn dim(&self) -> usize {
        self.targets.len()
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        u8::from(self.targets[col] == Some(row))
    }

    /// Row reached from column `col`, if any.
    pub fn target(&self, col: usize) -> Option<usize> {
        self.targets[col]
    }

    pub fn column_sum(&self, col: usize) -> u8 {
        u8::from(self.targets[col].is_some())
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| f64::from(self.get(i, j)))
    }
}

/// Transition matrix for label `c`. A label outside the graph's alphabet
/// yields the zero matrix.
pub fn transition_matrix(g: &ConstraintGraph, c: Outcome) -> TransitionMatrix {
    TransitionMatrix {
        label: c,
        targets: (0..g.node_count()).map(|v| g.successor(v, c)).collect(),
    }
}

/// Graph state: indicator of the node being left, or zero after an
/// infeasible transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GState {
    dim: usize,
    active: Option<usize>,
}

impl GState {
    pub fn unit(dim: usize, node: usize) -> Result<Self> {
        if node >= dim {
            return Err(Error::DimensionMismatch(format!(
                "node {node} out of range for {dim} nodes"
            )));
        }
        Ok(GState {
            dim,
            active: Some(node),
        })
    }

    pub fn zero(dim: usize) -> Self {
        GState { dim, active: None }
    }

    pub fn initial(g: &ConstraintGraph) -> Self {
        GState {
            dim: g.node_count(),
            active: Some(g.initial()),
        }
    }

    pub fn from_indicator(entries: &[u8]) -> Result<Self> {
        let mut active = None;
        for (i, &e) in entries.iter().enumerate() {
            match (e, active) {
                (0, _) => {}
                (1, None) => active = Some(i),
                (1, Some(_)) => {
                    return Err(Error::InvalidParameter(
                        "a graph state has at most one active node".into(),
                    ))
                }
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "graph state entries must be 0 or 1, got {e}"
                    )))
                }
            }
        }
        Ok(GState {
            dim: entries.len(),
            active,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn active(&self) -> Option<usize> {
        self.active
    }

    pub fn is_zero(&self) -> bool {
        self.active.is_none()
    }

    pub fn to_vector(&self) -> DVector<f64> {
        DVector::from_fn(
            self.dim,
            |i, _| {
                if Some(i) == self.active {
                    1.0
                } else {
                    0.0
                }
            },
        )
    }
}

/// `q_{t+1} = F_c q_t`.
pub fn step_gstate(f: &TransitionMatrix, q: &GState) -> Result<GState> {
    if f.dim() != q.dim() {
        return Err(Error::DimensionMismatch(format!(
            "transition matrix is {0}x{0} but the graph state has {1} entries",
            f.dim(),
            q.dim()
        )));
    }
    Ok(GState {
        dim: q.dim,
        active: q.active.and_then(|j| f.target(j)),
    })
}
