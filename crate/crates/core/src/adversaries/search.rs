//! Exhaustive search over adversaries against a fixed learner.

use crate::dims::CollectionState;
use crate::error::{Error, Result};
use crate::game::{
    CollectionSpace, GameSpec, Learner, Observation, Prediction, Realizability, Visibility,
};
use crate::Rational;
use num_traits::Zero;

/// Largest expected loss any oblivious set-realizable adversary can force on
/// `learner` over the spec's horizon. Searches every instance and reveal
/// sequence, then the worst alive type. Comparator loss is zero here, so
/// this is also the worst-case expected regret.
pub fn worst_case_expected_loss(spec: &GameSpec, learner: Box<dyn Learner>) -> Result<Rational> {
    if spec.protocol.realizability != Realizability::SetRealizable
        || spec.protocol.visibility != Visibility::Oblivious
    {
        return Err(Error::Unsupported(
            "adversary search needs set-realizable oblivious play".into(),
        ));
    }
    let space = CollectionSpace::build(spec)?;
    space.require_explicit()?;
    let mut played = Vec::with_capacity(spec.horizon);
    search(
        &space,
        CollectionState::full(&space),
        learner,
        &mut played,
        spec.horizon,
    )
}

fn search(
    space: &CollectionSpace,
    state: CollectionState,
    learner: Box<dyn Learner>,
    played: &mut Vec<(usize, Prediction)>,
    r: usize,
) -> Result<Rational> {
    if r == 0 {
        return Ok(state
            .ids()
            .map(|id| {
                played
                    .iter()
                    .map(|(x, p)| p.loss(space.image(id, *x)))
                    .fold(Rational::zero(), |a, b| a + b)
            })
            .max()
            .expect("state is nonempty"));
    }
    let mut best: Option<Rational> = None;
    for x in 0..space.n_instances() {
        let mut l = learner.clone_box();
        let p = l.predict(x)?;
        for y in state.feasible(space, x).iter() {
            let child = state.child(space, x, |_| false, y);
            let mut ly = l.clone_box();
            ly.observe(
                x,
                &Observation {
                    revealed: Some(y),
                    ..Default::default()
                },
            )?;
            played.push((x, p.clone()));
            let v = search(space, child, ly, played, r - 1)?;
            played.pop();
            if best.as_ref().is_none_or(|b| v > *b) {
                best = Some(v);
            }
        }
    }
    Ok(best.expect("some reveal is feasible"))
}
