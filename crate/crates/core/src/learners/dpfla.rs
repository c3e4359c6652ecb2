use crate::dims::{CollectionState, ValueSolver};
use crate::error::{Error, Result};
use crate::game::{CollectionSpace, GameSpec, Learner, Observation, Prediction};
use std::cell::RefCell;
use std::rc::Rc;
use std::sync::Arc;

/// Predicts the label minimizing the worst-case remaining value.
#[derive(Clone)]
pub struct Dpfla {
    solver: Rc<RefCell<ValueSolver>>,
    state: CollectionState,
    horizon: usize,
    played: usize,
    last: Option<Prediction>,
}

pub fn dpfla_learner(spec: &GameSpec) -> Result<Dpfla> {
    let solver = ValueSolver::labels(Arc::new(CollectionSpace::build(spec)?))?;
    Ok(Dpfla::with_solver(
        Rc::new(RefCell::new(solver)),
        spec.horizon,
    ))
}

impl Dpfla {
    /// Shares a label solver, e.g. with an adversary on the same spec.
    pub fn with_solver(solver: Rc<RefCell<ValueSolver>>, horizon: usize) -> Self {
        let state = solver.borrow().root();
        Dpfla {
            solver,
            state,
            horizon,
            played: 0,
            last: None,
        }
    }

    pub fn state(&self) -> &CollectionState {
        &self.state
    }

    /// Current potential: the prefix-seeded value over the remaining rounds.
    pub fn potential(&self) -> Result<u32> {
        self.solver
            .borrow_mut()
            .value(&self.state, self.horizon - self.played)
    }
}

impl Learner for Dpfla {
    fn name(&self) -> String {
        "dpfla".into()
    }

    fn predict(&mut self, x: usize) -> Result<Prediction> {
        if self.played >= self.horizon {
            return Err(Error::ProtocolViolation(
                "dpfla asked past its horizon".into(),
            ));
        }
        let r = self.horizon - self.played;
        let mut solver = self.solver.borrow_mut();
        let n = solver.space().n_labels();
        let mut best = (u32::MAX, 0u8);
        for y in 0..n as u8 {
            let v = solver.prediction_value(&self.state, x, &Prediction::Label(y), r)?;
            if v < best.0 {
                best = (v, y);
            }
        }
        let p = Prediction::Label(best.1);
        self.last = Some(p.clone());
        Ok(p)
    }

    fn observe(&mut self, x: usize, obs: &Observation) -> Result<()> {
        let y = obs
            .revealed
            .ok_or_else(|| Error::ProtocolViolation("dpfla needs a revealed label".into()))?;
        let p = self
            .last
            .take()
            .ok_or_else(|| Error::ProtocolViolation("observe before predict".into()))?;
        let solver = self.solver.borrow();
        let rule = solver.rule();
        self.state = self
            .state
            .child(solver.space(), x, |img| rule.is_event(&p, img), y);
        self.played += 1;
        if self.state.is_empty() {
            return Err(Error::EmptyConsistentSet);
        }
        Ok(())
    }

    fn clone_box(&self) -> Box<dyn Learner> {
        Box::new(self.clone())
    }
}
