use crate::bits::Label;
use crate::dims::{CollectionState, EventRule, ValueSolver};
use crate::error::{Error, Result};
use crate::game::{Adversary, CollectionSpace, GameSpec, Prediction, Round, Threshold};
use crate::measure_dims::grid_solver;
use std::cell::RefCell;
use std::rc::Rc;
use std::sync::Arc;

/// Plays the argmax instance and reveal of the memoized value function and
/// finalizes with the alive type holding the most events.
#[derive(Clone)]
pub struct Optimal {
    solver: Rc<RefCell<ValueSolver>>,
    state: CollectionState,
    horizon: usize,
}

/// Counts label mistakes.
pub fn optimal_adversary(spec: &GameSpec) -> Result<Optimal> {
    let solver = ValueSolver::labels(Arc::new(CollectionSpace::build(spec)?))?;
    Ok(Optimal::with_solver(
        Rc::new(RefCell::new(solver)),
        spec.horizon,
    ))
}

/// Counts rounds where the prediction puts at most 1 - gamma on the set,
/// over learner measures on the grid of size `g`.
pub fn optimal_scale_adversary(spec: &GameSpec, gamma: Threshold, g: u32) -> Result<Optimal> {
    let solver = grid_solver(Arc::new(CollectionSpace::build(spec)?), gamma, g)?;
    Ok(Optimal::with_solver(
        Rc::new(RefCell::new(solver)),
        spec.horizon,
    ))
}

impl Optimal {
    pub fn with_solver(solver: Rc<RefCell<ValueSolver>>, horizon: usize) -> Self {
        let state = solver.borrow().root();
        Optimal {
            solver,
            state,
            horizon,
        }
    }

    fn remaining(&self, history: &[Round]) -> Result<usize> {
        self.horizon
            .checked_sub(history.len())
            .filter(|&r| r > 0)
            .ok_or_else(|| Error::ProtocolViolation("adversary asked past its horizon".into()))
    }
}

impl Adversary for Optimal {
    fn name(&self) -> String {
        "optimal".into()
    }

    fn choose_instance(&mut self, history: &[Round]) -> Result<usize> {
        let r = self.remaining(history)?;
        let mut solver = self.solver.borrow_mut();
        let mut best = (0, 0);
        for x in 0..solver.space().n_instances() {
            let v = solver.instance_value(&self.state, x, r)?;
            if x == 0 || v > best.0 {
                best = (v, x);
            }
        }
        Ok(best.1)
    }

    fn reveal(&mut self, history: &[Round], x: usize, prediction: &Prediction) -> Result<Label> {
        let r = self.remaining(history)?;
        let mut solver = self.solver.borrow_mut();
        let rule = solver.rule();
        if let (EventRule::Mistake, Prediction::Measure(m)) = (rule, prediction) {
            if m.as_delta().is_none() {
                return Err(Error::Unsupported(
                    "label-mode adversary cannot score a mixed prediction".into(),
                ));
            }
        }
        let mut best: Option<(u32, Label)> = None;
        for y in self.state.feasible(solver.space(), x).iter() {
            if let Some(v) = solver.reveal_value(&self.state, x, prediction, y, r)? {
                if best.is_none_or(|(b, _)| v > b) {
                    best = Some((v, y));
                }
            }
        }
        let (_, y) = best.ok_or(Error::EmptyConsistentSet)?;
        self.state = self
            .state
            .child(solver.space(), x, |img| rule.is_event(prediction, img), y);
        Ok(y)
    }

    fn finalize_sets(&mut self, history: &[Round]) -> Result<Vec<crate::bits::LabelSet>> {
        let id = self.state.argmax_count().ok_or(Error::EmptyConsistentSet)?;
        let solver = self.solver.borrow();
        Ok(history
            .iter()
            .map(|r| solver.space().image(id, r.instance))
            .collect())
    }

    fn clone_box(&self) -> Box<dyn Adversary> {
        Box::new(self.clone())
    }
}
