//! Built-in plant/controller pairs.
//!
//! `p1c1` is a third-order plant sampled at 0.5 s with a first-order
//! controller. `p2c2` is a third-order plant sampled at 10 ms with a static
//! state feedback; the plant exposes `[x; u]` as its output so the feedback
//! acts on the applied input as well.

use nalgebra::DMatrix;

use crate::dynamics::StateSpace;

pub const NAMES: [&str; 2] = ["p1c1", "p2c2"];

pub fn p1c1() -> (StateSpace, StateSpace) {
    let plant = StateSpace::new(
        DMatrix::from_row_slice(
            3,
            3,
            &[0.606, 0.304, 0.076, 0.0, 0.606, 0.304, 0.0, 0.0, 0.606],
        ),
        DMatrix::from_column_slice(3, 1, &[0.014, 0.091, 0.394]),
        DMatrix::from_row_slice(1, 3, &[1.0, 0.0, 0.0]),
        DMatrix::zeros(1, 1),
    )
    .expect("consistent shapes")
    .with_period(0.5);
    let ctrl = StateSpace::new(
        DMatrix::from_element(1, 1, 1.0),
        DMatrix::from_element(1, 1, 0.359),
        DMatrix::from_element(1, 1, 0.454),
        DMatrix::from_element(1, 1, 0.633),
    )
    .expect("consistent shapes")
    .with_period(0.5);
    (plant, ctrl)
}

pub fn p2c2() -> (StateSpace, StateSpace) {
    let plant = StateSpace::new(
        DMatrix::from_row_slice(
            3,
            3,
            &[
                0.999, 0.012, -5.5e-4, //
                0.020, 1.0, -5.5e-6, //
                5.0e-5, 0.005, 1.0,
            ],
        ),
        DMatrix::from_column_slice(3, 1, &[0.020, 2.0e-4, 3.3e-7]),
        DMatrix::from_row_slice(4, 3, &[1., 0., 0., 0., 1., 0., 0., 0., 1., 0., 0., 0.]),
        DMatrix::from_column_slice(4, 1, &[0., 0., 0., 1.]),
    )
    .expect("consistent shapes")
    .with_period(0.01);
    let ctrl = StateSpace::new(
        DMatrix::zeros(0, 0),
        DMatrix::zeros(0, 4),
        DMatrix::zeros(1, 0),
        DMatrix::from_row_slice(1, 4, &[3.380, 3.417, 1.846, 0.322]),
    )
    .expect("consistent shapes")
    .with_period(0.01);
    (plant, ctrl)
}

pub fn by_name(name: &str) -> Option<(StateSpace, StateSpace)> {
    match name.trim().to_ascii_lowercase().as_str() {
        "p1c1" => Some(p1c1()),
        "p2c2" => Some(p2c2()),
        _ => None,
    }
}
