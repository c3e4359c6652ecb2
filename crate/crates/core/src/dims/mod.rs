//! Deterministic dimensions: PFL and its prefix form, the Littlestone-type
//! dimensions, and the brute-force tree oracle.

mod littlestone;
mod minimax;
mod naive;
mod relations;
mod solver;
mod state;
mod tree;

pub use littlestone::{default_cap, ml_sl_bl_dim, Variant};
pub use minimax::minimax_det_regret;
pub use naive::{
    naive_best, naive_tree_oracle, naive_tree_oracle_with_budget, tree_count, within_budget,
    DEFAULT_TREE_BUDGET,
};
pub use relations::{dimension_relations_report, RelationsReport};
pub use solver::{set_state_budget, state_budget, EdgeSet, ValueSolver, DEFAULT_STATE_BUDGET};
pub use state::{CollectionState, EventRule};
pub use tree::{prefix_index, prefixes_below, witness_tree, ShatteringTree};

use crate::error::{Error, Result};
use crate::game::{CollectionSpace, GameSpec, Prediction};
use std::sync::Arc;

pub fn label_solver(spec: &GameSpec) -> Result<ValueSolver> {
    ValueSolver::labels(Arc::new(CollectionSpace::build(spec)?))
}

/// Largest number of events a depth-d tree forces.
pub fn pfl_dim(spec: &GameSpec, d: usize) -> Result<u32> {
    let mut solver = label_solver(spec)?;
    let root = solver.root();
    solver.value(&root, d)
}

/// PFL seeded with a played prefix of instances, predictions and reveals.
pub fn ppfl_dim(
    spec: &GameSpec,
    xs: &[usize],
    predictions: &[u8],
    reveals: &[u8],
    d: usize,
) -> Result<u32> {
    if xs.len() > spec.horizon {
        return Err(Error::InvalidSpec("prefix longer than the horizon".into()));
    }
    let mut solver = label_solver(spec)?;
    let preds: Vec<Prediction> = predictions.iter().map(|&y| Prediction::Label(y)).collect();
    let state =
        CollectionState::from_prefix(solver.space(), EventRule::Mistake, xs, &preds, reveals)?;
    solver.value(&state, d)
}
