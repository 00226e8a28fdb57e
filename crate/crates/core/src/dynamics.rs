//! Plant/controller state-space models and the per-outcome closed-loop
//! matrices of the switched system.
//!
//! The plant `x⁺ = A_p x + B_p u, y = C_p x + D_p u` is driven by a one-step
//! delay controller `z⁺ = A_c z + B_c e, u⁺ = C_c z + D_c e` with `e = -y`.
//! Under Kill the closed-loop state is `[x; z; u]`; Skip-Next appends copies
//! `[x̂; û]` of the measurement and actuation a late job will still use.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::constraint::{Outcome, OutcomeString, Strategy};
use crate::error::{Error, Result};

/// Discrete-time LTI model `(A, B, C, D)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub d: DMatrix<f64>,
    /// Sampling period in seconds; metadata only.
    pub period: Option<f64>,
}

impl StateSpace {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, c: DMatrix<f64>, d: DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "A must be square, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if b.nrows() != n {
            return Err(Error::DimensionMismatch(format!(
                "B has {} rows, expected {n}",
                b.nrows()
            )));
        }
        if c.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "C has {} columns, expected {n}",
                c.ncols()
            )));
        }
        if d.nrows() != c.nrows() || d.ncols() != b.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "D is {}x{}, expected {}x{}",
                d.nrows(),
                d.ncols(),
                c.nrows(),
                b.ncols()
            )));
        }
        Ok(StateSpace {
            a,
            b,
            c,
            d,
            period: None,
        })
    }

    pub fn with_period(mut self, seconds: f64) -> Self {
        self.period = Some(seconds);
        self
    }

    /// Builds a model from row-major nested arrays. Shapes of empty matrices
    /// are inferred from their neighbours so that stateless controllers
    /// (`A = []`) can be written down.
    pub fn from_rows(
        a: &[Vec<f64>],
        b: &[Vec<f64>],
        c: &[Vec<f64>],
        d: &[Vec<f64>],
    ) -> Result<Self> {
        let states = a.len();
        let outputs = c.len().max(d.len());
        let inputs = b
            .first()
            .map(Vec::len)
            .or_else(|| d.first().map(Vec::len))
            .unwrap_or(0);
        Self::new(
            dense("A", a, states, states)?,
            dense("B", b, states, inputs)?,
            dense("C", c, outputs, states)?,
            dense("D", d, outputs, inputs)?,
        )
    }

    pub fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
        (0..m.nrows())
            .map(|i| m.row(i).iter().copied().collect())
            .collect()
    }

    pub fn states(&self) -> usize {
        self.a.nrows()
    }

    pub fn inputs(&self) -> usize {
        self.b.ncols()
    }

    pub fn outputs(&self) -> usize {
        self.c.nrows()
    }
}

fn dense(name: &str, rows: &[Vec<f64>], nrows: usize, ncols: usize) -> Result<DMatrix<f64>> {
    if rows.len() != nrows && !(rows.is_empty() && (nrows == 0 || ncols == 0)) {
        return Err(Error::DimensionMismatch(format!(
            "{name} has {} rows, expected {nrows}",
            rows.len()
        )));
    }
    if rows.is_empty() {
        return Ok(DMatrix::zeros(nrows, ncols));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            return Err(Error::DimensionMismatch(format!(
                "{name} row {i} has {} entries, expected {ncols}",
                row.len()
            )));
        }
        if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "{name} row {i} contains non-finite value {bad}"
            )));
        }
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

/// JSON shape of a state-space model (`"A"`, `"B"`, `"C"`, `"D"`, `"period_s"`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpaceDoc {
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<f64>>,
    #[serde(rename = "D")]
    pub d: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period_s: Option<f64>,
}

impl TryFrom<&StateSpaceDoc> for StateSpace {
    type Error = Error;

    fn try_from(doc: &StateSpaceDoc) -> Result<Self> {
        let mut ss = StateSpace::from_rows(&doc.a, &doc.b, &doc.c, &doc.d)?;
        ss.period = doc.period_s;
        Ok(ss)
    }
}

impl From<&StateSpace> for StateSpaceDoc {
    fn from(ss: &StateSpace) -> Self {
        StateSpaceDoc {
            a: StateSpace::rows(&ss.a),
            b: StateSpace::rows(&ss.b),
            c: StateSpace::rows(&ss.c),
            d: StateSpace::rows(&ss.d),
            period_s: ss.period,
        }
    }
}

/// What the actuator outputs in a period where no control job completes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ActuatorMode {
    #[serde(rename = "zero")]
    Zero,
    #[serde(rename = "hold")]
    Hold,
}

impl ActuatorMode {
    pub fn name(self) -> &'static str {
        match self {
            ActuatorMode::Zero => "zero",
            ActuatorMode::Hold => "hold",
        }
    }

    /// `Δ` of size `r`: zero or identity.
    pub fn delta(self, r: usize) -> DMatrix<f64> {
        match self {
            ActuatorMode::Zero => DMatrix::zeros(r, r),
            ActuatorMode::Hold => DMatrix::identity(r, r),
        }
    }
}

impl fmt::Display for ActuatorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ActuatorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "zero" => Ok(ActuatorMode::Zero),
            "hold" => Ok(ActuatorMode::Hold),
            other => Err(Error::Parse(format!(
                "unknown actuator mode `{other}` (expected `zero` or `hold`)"
            ))),
        }
    }
}

/// One closed-loop matrix per outcome of the strategy's alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedLoopSet {
    strategy: Strategy,
    mode: ActuatorMode,
    dim: usize,
    /// Indexed by `Outcome::index`.
    matrices: Vec<DMatrix<f64>>,
}

impl ClosedLoopSet {
    /// Wraps user-provided matrices, e.g. scalar or toy systems.
    pub fn from_matrices(
        strategy: Strategy,
        mode: ActuatorMode,
        matrices: Vec<DMatrix<f64>>,
    ) -> Result<Self> {
        if matrices.len() != strategy.alphabet().len() {
            return Err(Error::AlphabetMismatch(format!(
                "{} matrices given for the {}-letter {strategy} alphabet",
                matrices.len(),
                strategy.alphabet().len()
            )));
        }
        let dim = matrices[0].nrows();
        for m in &matrices {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "closed-loop matrices must all be {dim}x{dim}, got {}x{}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(ClosedLoopSet {
            strategy,
            mode,
            dim,
            matrices,
        })
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn mode(&self) -> ActuatorMode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, outcome: Outcome) -> Option<&DMatrix<f64>> {
        self.matrices.get(outcome.index())
    }

    pub fn matrices(&self) -> impl Iterator<Item = (Outcome, &DMatrix<f64>)> {
        self.strategy.alphabet().iter().copied().zip(&self.matrices)
    }

    /// `A_{α_N} ··· A_{α_1}`; the first symbol acts first.
    pub fn product(&self, seq: &[Outcome]) -> Result<DMatrix<f64>> {
        let mut acc = DMatrix::identity(self.dim, self.dim);
        for &o in seq {
            let m = self.matrix(o).ok_or_else(|| {
                Error::AlphabetMismatch(format!(
                    "no closed-loop matrix for `{o}` under {}",
                    self.strategy
                ))
            })?;
            acc = m * acc;
        }
        Ok(acc)
    }
}

/// Places `block` at (`row`, `col`) of `target`.
fn put(target: &mut DMatrix<f64>, row: usize, col: usize, block: &DMatrix<f64>) {
    target
        .view_mut((row, col), (block.nrows(), block.ncols()))
        .copy_from(block);
}

/// Closed-loop matrices for `strategy` and `mode`.
pub fn closed_loop_set(
    plant: &StateSpace,
    ctrl: &StateSpace,
    strategy: Strategy,
    mode: ActuatorMode,
) -> Result<ClosedLoopSet> {
    let (n, r, q) = (plant.states(), plant.inputs(), plant.outputs());
    let s = ctrl.states();
    if ctrl.inputs() != q {
        return Err(Error::DimensionMismatch(format!(
            "controller takes {} inputs but the plant has {q} outputs",
            ctrl.inputs()
        )));
    }
    if ctrl.outputs() != r {
        return Err(Error::DimensionMismatch(format!(
            "controller produces {} outputs but the plant has {r} inputs",
            ctrl.outputs()
        )));
    }

    let bc_cp = -(&ctrl.b * &plant.c);
    let bc_dp = -(&ctrl.b * &plant.d);
    let dc_cp = -(&ctrl.d * &plant.c);
    let dc_dp = -(&ctrl.d * &plant.d);
    let delta = mode.delta(r);
    let eye_s = DMatrix::identity(s, s);

    // Offsets of x, z, u (and x̂, û for Skip-Next) in the stacked state.
    let (ox, oz, ou) = (0, n, n + s);
    let (oxh, ouh) = (n + s + r, 2 * n + s + r);

    let matrices = match strategy {
        Strategy::Kill => {
            let d = n + s + r;
            let mut hit = DMatrix::zeros(d, d);
            put(&mut hit, ox, ox, &plant.a);
            put(&mut hit, ox, ou, &plant.b);
            put(&mut hit, oz, ox, &bc_cp);
            put(&mut hit, oz, oz, &ctrl.a);
            put(&mut hit, oz, ou, &bc_dp);
            put(&mut hit, ou, ox, &dc_cp);
            put(&mut hit, ou, oz, &ctrl.c);
            put(&mut hit, ou, ou, &dc_dp);

            let mut miss = DMatrix::zeros(d, d);
            put(&mut miss, ox, ox, &plant.a);
            put(&mut miss, ox, ou, &plant.b);
            put(&mut miss, oz, oz, &eye_s);
            put(&mut miss, ou, ou, &delta);
            vec![hit, miss]
        }
        Strategy::SkipNext => {
            let d = 2 * n + s + 2 * r;
            let mut hit = DMatrix::zeros(d, d);
            for row in [ox, oxh] {
                put(&mut hit, row, ox, &plant.a);
                put(&mut hit, row, ou, &plant.b);
            }
            put(&mut hit, oz, ox, &bc_cp);
            put(&mut hit, oz, oz, &ctrl.a);
            put(&mut hit, oz, ou, &bc_dp);
            for row in [ou, ouh] {
                put(&mut hit, row, ox, &dc_cp);
                put(&mut hit, row, oz, &ctrl.c);
                put(&mut hit, row, ou, &dc_dp);
            }

            let mut miss = DMatrix::zeros(d, d);
            put(&mut miss, ox, ox, &plant.a);
            put(&mut miss, ox, ou, &plant.b);
            put(&mut miss, oz, oz, &eye_s);
            put(&mut miss, ou, ou, &delta);
            put(&mut miss, oxh, oxh, &DMatrix::identity(n, n));
            put(&mut miss, ouh, ouh, &DMatrix::identity(r, r));

            let mut recovery = DMatrix::zeros(d, d);
            for row in [ox, oxh] {
                put(&mut recovery, row, ox, &plant.a);
                put(&mut recovery, row, ou, &plant.b);
            }
            put(&mut recovery, oz, oz, &ctrl.a);
            put(&mut recovery, oz, oxh, &bc_cp);
            put(&mut recovery, oz, ouh, &bc_dp);
            for row in [ou, ouh] {
                put(&mut recovery, row, oz, &ctrl.c);
                put(&mut recovery, row, oxh, &dc_cp);
                put(&mut recovery, row, ouh, &dc_dp);
            }
            vec![hit, miss, recovery]
        }
    };
    ClosedLoopSet::from_matrices(strategy, mode, matrices)
}

/// Trajectory `x_0, x_1, …, x_N` with `x_{t} = A_{α_t} x_{t-1}`.
///
/// The sequence must be reachable from the all-hit startup under the
/// strategy's successor relation.
pub fn simulate(
    cl: &ClosedLoopSet,
    seq: &OutcomeString,
    x0: &DVector<f64>,
) -> Result<Vec<DVector<f64>>> {
    if x0.len() != cl.dim() {
        return Err(Error::DimensionMismatch(format!(
            "initial state has {} entries, closed loop has {}",
            x0.len(),
            cl.dim()
        )));
    }
    seq.validate(cl.strategy(), true)?;
    let mut out = Vec::with_capacity(seq.len() + 1);
    out.push(x0.clone());
    for &o in seq.symbols() {
        let m = cl.matrix(o).expect("validated against the alphabet");
        let next = m * out.last().expect("non-empty");
        out.push(next);
    }
    Ok(out)
}
