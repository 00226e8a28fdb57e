//! Kronecker lifting of the graph-constrained switching system into an
//! unconstrained one: `P_c = F_c ⊗ A_c`.
//!
//! Lifted matrices are `|V|·d` square, so they are only materialized for
//! checks and small instances. The bound estimators work on graph walks.

use nalgebra::{DMatrix, DVector};

use crate::automaton::{transition_matrix, ConstraintGraph};
use crate::constraint::{Outcome, OutcomeString};
use crate::dynamics::ClosedLoopSet;
use crate::error::{Error, Result};
use crate::jsr::spectral_norm;

/// Block matrix `[a_ij · B]`.
pub fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (p, q) = b.shape();
    let mut out = DMatrix::zeros(a.nrows() * p, a.ncols() * q);
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let x = a[(i, j)];
            if x != 0.0 {
                out.view_mut((i * p, j * q), (p, q)).copy_from(&(b * x));
            }
        }
    }
    out
}

/// One lifted matrix per character of the strategy alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedSet {
    block: usize,
    nodes: usize,
    /// Indexed by `Outcome::index`.
    matrices: Vec<DMatrix<f64>>,
}

impl LiftedSet {
    pub fn block(&self) -> usize {
        self.block
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn dim(&self) -> usize {
        self.block * self.nodes
    }

    pub fn matrix(&self, c: Outcome) -> Option<&DMatrix<f64>> {
        self.matrices.get(c.index())
    }

    /// `P_{α_N} ··· P_{α_1}`.
    pub fn product(&self, seq: &[Outcome]) -> Result<DMatrix<f64>> {
        let mut acc = DMatrix::identity(self.dim(), self.dim());
        for &c in seq {
            let p = self
                .matrix(c)
                .ok_or_else(|| Error::AlphabetMismatch(format!("no lifted matrix for `{c}`")))?;
            acc = p * acc;
        }
        Ok(acc)
    }

    /// Nested row arrays per character, for debugging output.
    pub fn to_rows(&self) -> Vec<(char, Vec<Vec<f64>>)> {
        self.matrices
            .iter()
            .zip(Outcome::ALL)
            .map(|(m, c)| {
                let rows = (0..m.nrows())
                    .map(|i| m.row(i).iter().copied().collect())
                    .collect();
                (c.symbol(), rows)
            })
            .collect()
    }
}

pub fn lift(g: &ConstraintGraph, cl: &ClosedLoopSet) -> Result<LiftedSet> {
    if g.strategy() != cl.strategy() {
        return Err(Error::AlphabetMismatch(format!(
            "graph uses the {} alphabet but the closed loop uses {}",
            g.strategy(),
            cl.strategy()
        )));
    }
    let matrices = cl
        .matrices()
        .map(|(c, a)| kron(&transition_matrix(g, c).to_dense(), a))
        .collect();
    Ok(LiftedSet {
        block: cl.dim(),
        nodes: g.node_count(),
        matrices,
    })
}

/// `ξ_N = P_{α_N} ··· P_{α_1} ξ_0`.
pub fn lifted_product(
    ls: &LiftedSet,
    seq: &OutcomeString,
    xi0: &DVector<f64>,
) -> Result<DVector<f64>> {
    if xi0.len() != ls.dim() {
        return Err(Error::DimensionMismatch(format!(
            "lifted state has {} entries, expected {}",
            xi0.len(),
            ls.dim()
        )));
    }
    let mut xi = xi0.clone();
    for &c in seq.symbols() {
        let p = ls
            .matrix(c)
            .ok_or_else(|| Error::AlphabetMismatch(format!("no lifted matrix for `{c}`")))?;
        xi = p * xi;
    }
    Ok(xi)
}

/// `max_j Σ_i ‖P_ij‖₂` over the `block`-sized blocks of `p`.
pub fn block_column_norm(p: &DMatrix<f64>, block: usize) -> Result<f64> {
    if block == 0 || !p.nrows().is_multiple_of(block) || !p.ncols().is_multiple_of(block) {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix is not made of {block}x{block} blocks",
            p.nrows(),
            p.ncols()
        )));
    }
    let (rows, cols) = (p.nrows() / block, p.ncols() / block);
    let mut best: f64 = 0.0;
    for j in 0..cols {
        let mut sum = 0.0;
        for i in 0..rows {
            let b = p.view((i * block, j * block), (block, block));
            if b.iter().any(|&x| x != 0.0) {
                sum += spectral_norm(&b.into_owned());
            }
        }
        best = best.max(sum);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{build_graph, minimize};
    use crate::constraint::{Constraint, ConstraintSet, Strategy};
    use crate::dynamics::{closed_loop_set, ActuatorMode};
    use crate::systems;

    fn fig1_left() -> ConstraintGraph {
        let cs = ConstraintSet::single(Constraint::any_miss(1, 3).unwrap(), Strategy::Kill);
        minimize(&build_graph(&cs).unwrap())
    }

    #[test]
    fn kron_matches_nalgebra() {
        let a = DMatrix::from_row_slice(2, 3, &[1., -2., 0., 0.5, 3., 4.]);
        let b = DMatrix::from_row_slice(3, 2, &[1., 2., 3., 4., 5., 6.]);
        assert_eq!(kron(&a, &b), a.kronecker(&b));
        let eye = DMatrix::<f64>::identity(2, 2);
        let blocks = kron(&eye, &b);
        assert_eq!(blocks.view((0, 0), (3, 2)), b);
        assert_eq!(blocks.view((3, 2), (3, 2)), b);
        assert_eq!(kron(&DMatrix::zeros(2, 2), &b), DMatrix::zeros(6, 4));
    }

    #[test]
    fn lifted_hit_matrix_layout() {
        let g = fig1_left();
        let (p, c) = systems::p1c1();
        let cl = closed_loop_set(&p, &c, Strategy::Kill, ActuatorMode::Zero).unwrap();
        let ls = lift(&g, &cl).unwrap();
        let ah = cl.matrix(Outcome::Hit).unwrap();
        let ph = ls.matrix(Outcome::Hit).unwrap();
        let d = cl.dim();
        assert_eq!(ls.dim(), 3 * d);
        for (i, j, nonzero) in [
            (0, 0, true),
            (0, 2, true),
            (2, 1, true),
            (1, 1, false),
            (0, 1, false),
        ] {
            let block = ph.view((i * d, j * d), (d, d));
            if nonzero {
                assert_eq!(block, *ah);
            } else {
                assert!(block.iter().all(|&x| x == 0.0));
            }
        }
    }

    #[test]
    fn single_node_lifting_and_mismatch() {
        let cs = ConstraintSet::single(Constraint::any_miss(0, 1).unwrap(), Strategy::Kill);
        let g = minimize(&build_graph(&cs).unwrap());
        let (p, c) = systems::p1c1();
        let cl = closed_loop_set(&p, &c, Strategy::Kill, ActuatorMode::Hold).unwrap();
        let ls = lift(&g, &cl).unwrap();
        assert_eq!(
            ls.matrix(Outcome::Hit).unwrap(),
            cl.matrix(Outcome::Hit).unwrap()
        );
        assert_eq!(*ls.matrix(Outcome::Miss).unwrap(), DMatrix::zeros(5, 5));

        let skip = closed_loop_set(&p, &c, Strategy::SkipNext, ActuatorMode::Hold).unwrap();
        assert!(matches!(lift(&g, &skip), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn lifted_product_follows_example() {
        let g = fig1_left();
        let (p, c) = systems::p1c1();
        let cl = closed_loop_set(&p, &c, Strategy::Kill, ActuatorMode::Zero).unwrap();
        let ls = lift(&g, &cl).unwrap();
        let d = cl.dim();
        let x1 = DVector::from_fn(d, |i, _| 1.0 + i as f64);
        let mut xi0 = DVector::zeros(3 * d);
        xi0.rows_mut(0, d).copy_from(&x1);

        let xi = lifted_product(&ls, &"HM".parse().unwrap(), &xi0).unwrap();
        let expected = cl.product(&[Outcome::Hit, Outcome::Miss]).unwrap() * &x1;
        assert!((xi.rows(d, d) - &expected).norm() < 1e-12);
        assert_eq!(xi.rows(0, d).norm(), 0.0);
        assert_eq!(xi.rows(2 * d, d).norm(), 0.0);

        let dead = lifted_product(&ls, &"MM".parse().unwrap(), &xi0).unwrap();
        assert_eq!(dead.norm(), 0.0);
        assert_eq!(
            lifted_product(&ls, &OutcomeString::default(), &xi0).unwrap(),
            xi0
        );
        assert!(matches!(
            lifted_product(&ls, &"H".parse().unwrap(), &DVector::zeros(3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn block_column_norm_cases() {
        let g = fig1_left();
        let (p, c) = systems::p1c1();
        let cl = closed_loop_set(&p, &c, Strategy::Kill, ActuatorMode::Zero).unwrap();
        let ls = lift(&g, &cl).unwrap();
        let d = cl.dim();
        let hmh = [Outcome::Hit, Outcome::Miss, Outcome::Hit];
        let lifted = ls.product(&hmh).unwrap();
        let direct = spectral_norm(&cl.product(&hmh).unwrap());
        assert!((block_column_norm(&lifted, d).unwrap() - direct).abs() < 1e-12);

        let mm = ls.product(&[Outcome::Miss, Outcome::Miss]).unwrap();
        assert_eq!(block_column_norm(&mm, d).unwrap(), 0.0);
        assert_eq!(block_column_norm(&DMatrix::zeros(6, 6), 3).unwrap(), 0.0);
        assert!(block_column_norm(&DMatrix::zeros(5, 5), 3).is_err());
    }
}
