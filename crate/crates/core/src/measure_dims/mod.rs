//! Measure-based dimensions, scale selection and the randomized minimax value.

mod grid;
mod msp;
mod rand;

pub use grid::{grid_size, measure_grid, measure_grid_with_budget, DEFAULT_GRID_BUDGET};
pub use msp::msp;
pub use rand::RandSolver;

use crate::dims::{CollectionState, EdgeSet, EventRule, ValueSolver};
use crate::error::{Error, Result};
use crate::game::{
    CollectionSpace, GameSpec, Measure, Prediction, Realizability, Threshold, Visibility,
};
use crate::Rational;
use serde::Serialize;
use std::sync::Arc;

/// A grid-restricted value. The learner only plays grid measures, which can
/// only raise the value, so this is an upper bound on the unrestricted one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridValue {
    pub value: u32,
    pub grid: u32,
    pub grid_restricted: bool,
}

pub fn grid_solver(space: Arc<CollectionSpace>, gamma: Threshold, g: u32) -> Result<ValueSolver> {
    let measures = measure_grid(space.n_labels(), g)?;
    ValueSolver::new(space, EdgeSet::Grid { measures, gamma })
}

pub fn pms_dim(spec: &GameSpec, t: usize, gamma: Threshold, g: u32) -> Result<GridValue> {
    let mut solver = grid_solver(Arc::new(CollectionSpace::build(spec)?), gamma, g)?;
    let root = solver.root();
    let value = solver.value(&root, t)?;
    Ok(GridValue {
        value,
        grid: g,
        grid_restricted: true,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn ppms_dim(
    spec: &GameSpec,
    xs: &[usize],
    measures: &[Measure],
    reveals: &[u8],
    d: usize,
    gamma: Threshold,
    g: u32,
) -> Result<GridValue> {
    let mut solver = grid_solver(Arc::new(CollectionSpace::build(spec)?), gamma, g)?;
    let preds: Vec<Prediction> = measures.iter().cloned().map(Prediction::Measure).collect();
    let state =
        CollectionState::from_prefix(solver.space(), EventRule::Scale(gamma), xs, &preds, reveals)?;
    let value = solver.value(&state, d)?;
    Ok(GridValue {
        value,
        grid: g,
        grid_restricted: true,
    })
}

/// Exact value of the t-round game where the learner plays grid measures.
pub fn minimax_rand_regret(spec: &GameSpec, t: usize, g: u32) -> Result<Rational> {
    if spec.protocol.realizability != Realizability::SetRealizable
        || spec.protocol.visibility != Visibility::Oblivious
    {
        return Err(Error::Unsupported(
            "randomized minimax needs set-realizable oblivious play".into(),
        ));
    }
    let grid = measure_grid(spec.n_labels, g)?;
    let mut solver = RandSolver::new(Arc::new(CollectionSpace::build(spec)?), &grid, g)?;
    solver.value_from_root(t)
}

/// N = ceil(log2 T) + 1 scales.
pub fn default_scale_count(t: usize) -> usize {
    let mut n = 0;
    while (1usize << n) < t {
        n += 1;
    }
    n + 1
}

/// gamma_i = 2^-i for i = 1..=n.
pub fn dyadic_scales(n: usize) -> Vec<Rational> {
    (1..=n)
        .map(|i| Rational::new(1.into(), num_bigint::BigInt::from(1) << i))
        .collect()
}
