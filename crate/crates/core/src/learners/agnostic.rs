//! Exact deterministic minimax regret when sets are only required to meet
//! the class (or nothing at all).
//!
//! Regret is max over hypotheses h of sum_t ([prediction not in S_t] -
//! [h(x_t) not in S_t]), and the sets of different rounds are chosen
//! independently, so the adversary's end-of-game choice splits into
//! per-round gains w(x, prediction, reveal)[h]. The recursion then only
//! needs the accumulated gain per hypothesis.

use crate::bits::{Label, LabelSet};
use crate::error::{Error, Result};
use crate::game::{GameSpec, Learner, Observation, Prediction, Realizability};
use rustc_hash::FxHashMap;
use std::cell::RefCell;
use std::rc::Rc;

pub struct AgnosticValue {
    n_instances: usize,
    n_labels: usize,
    n_hyps: usize,
    /// gains[(x * n + p) * n + y] per hypothesis; None when no set holds y.
    gains: Vec<Option<Vec<i32>>>,
    memo: FxHashMap<(usize, Vec<i32>), i32>,
}

impl AgnosticValue {
    pub fn new(spec: &GameSpec) -> Result<Self> {
        let Some(tables) = spec.hypotheses.tables() else {
            return Err(Error::Unsupported(
                "agnostic minimax needs an explicit class".into(),
            ));
        };
        if spec.protocol.realizability == Realizability::SetRealizable {
            return Err(Error::Unsupported(
                "agnostic minimax is for existence-realizable or agnostic play".into(),
            ));
        }
        let sets = spec.set_system.sets()?;
        let n = spec.n_labels;
        let mut gains = Vec::with_capacity(spec.n_instances * n * n);
        for x in 0..spec.n_instances {
            let valid: Vec<LabelSet> = sets
                .iter()
                .copied()
                .filter(|s| {
                    spec.protocol.realizability == Realizability::Agnostic
                        || tables.iter().any(|f| s.contains(f[x]))
                })
                .collect();
            for p in 0..n as Label {
                for y in 0..n as Label {
                    let holding: Vec<LabelSet> =
                        valid.iter().copied().filter(|s| s.contains(y)).collect();
                    gains.push((!holding.is_empty()).then(|| {
                        tables
                            .iter()
                            .map(|f| {
                                holding
                                    .iter()
                                    .map(|s| !s.contains(p) as i32 - !s.contains(f[x]) as i32)
                                    .max()
                                    .unwrap()
                            })
                            .collect()
                    }));
                }
            }
        }
        Ok(AgnosticValue {
            n_instances: spec.n_instances,
            n_labels: n,
            n_hyps: tables.len(),
            gains,
            memo: FxHashMap::default(),
        })
    }

    pub fn root(&self) -> Vec<i32> {
        vec![0; self.n_hyps]
    }

    fn gain(&self, x: usize, p: Label, y: Label) -> Option<&[i32]> {
        let n = self.n_labels;
        self.gains[(x * n + p as usize) * n + y as usize].as_deref()
    }

    fn step(acc: &[i32], g: &[i32]) -> Vec<i32> {
        acc.iter().zip(g).map(|(a, b)| a + b).collect()
    }

    /// Minimax regret of `r` more rounds after accumulating `acc`.
    pub fn value(&mut self, acc: &[i32], r: usize) -> i32 {
        if r == 0 {
            return *acc.iter().max().unwrap();
        }
        if let Some(&v) = self.memo.get(&(r, acc.to_vec())) {
            return v;
        }
        let best = (0..self.n_instances)
            .map(|x| self.instance_value(acc, x, r))
            .max()
            .unwrap();
        self.memo.insert((r, acc.to_vec()), best);
        best
    }

    fn instance_value(&mut self, acc: &[i32], x: usize, r: usize) -> i32 {
        (0..self.n_labels as Label)
            .map(|p| self.prediction_value(acc, x, p, r))
            .min()
            .unwrap()
    }

    /// Worst case over reveals of predicting `p` at `x`.
    pub fn prediction_value(&mut self, acc: &[i32], x: usize, p: Label, r: usize) -> i32 {
        let mut worst = i32::MIN;
        for y in 0..self.n_labels as Label {
            if let Some(g) = self.gain(x, p, y) {
                let next = Self::step(acc, g);
                worst = worst.max(self.value(&next, r - 1));
            }
        }
        worst
    }

    /// Accumulated gains after a played round.
    pub fn advance(&self, acc: &[i32], x: usize, p: Label, y: Label) -> Result<Vec<i32>> {
        let g = self
            .gain(x, p, y)
            .ok_or_else(|| Error::ProtocolViolation(format!("no valid set holds label {y}")))?;
        Ok(Self::step(acc, g))
    }
}

/// Deterministic minimax regret of the spec's horizon.
pub fn agnostic_minimax_regret(spec: &GameSpec) -> Result<i32> {
    let mut v = AgnosticValue::new(spec)?;
    let root = v.root();
    Ok(v.value(&root, spec.horizon))
}

/// Plays the argmin of the agnostic recursion (lowest label on ties).
#[derive(Clone)]
pub struct AgnosticMinimax {
    value: Rc<RefCell<AgnosticValue>>,
    acc: Vec<i32>,
    horizon: usize,
    played: usize,
    last: Option<Label>,
}

pub fn agnostic_minimax_learner(spec: &GameSpec) -> Result<AgnosticMinimax> {
    let value = AgnosticValue::new(spec)?;
    let acc = value.root();
    Ok(AgnosticMinimax {
        value: Rc::new(RefCell::new(value)),
        acc,
        horizon: spec.horizon,
        played: 0,
        last: None,
    })
}

impl Learner for AgnosticMinimax {
    fn name(&self) -> String {
        "agnostic_minimax".into()
    }

    fn predict(&mut self, x: usize) -> Result<Prediction> {
        if self.played >= self.horizon {
            return Err(Error::ProtocolViolation(
                "learner asked past its horizon".into(),
            ));
        }
        let r = self.horizon - self.played;
        let mut v = self.value.borrow_mut();
        let mut best = (i32::MAX, 0);
        for p in 0..v.n_labels as Label {
            let w = v.prediction_value(&self.acc, x, p, r);
            if w < best.0 {
                best = (w, p);
            }
        }
        self.last = Some(best.1);
        Ok(Prediction::Label(best.1))
    }

    fn observe(&mut self, x: usize, obs: &Observation) -> Result<()> {
        let y = obs
            .revealed
            .ok_or_else(|| Error::ProtocolViolation("learner needs a revealed label".into()))?;
        let p = self
            .last
            .take()
            .ok_or_else(|| Error::ProtocolViolation("observe before predict".into()))?;
        self.acc = self.value.borrow().advance(&self.acc, x, p, y)?;
        self.played += 1;
        Ok(())
    }

    fn clone_box(&self) -> Box<dyn Learner> {
        Box::new(self.clone())
    }
}
