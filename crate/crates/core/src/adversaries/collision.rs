//! Pair-tracking adversary for classes whose distinct members agree on few
//! instances.
//!
//! Each round it reveals a label no tracked or excluded hypothesis outputs
//! at the chosen instance, remembers the hypotheses that output it as a
//! pair, and counts how often the learner's predictions match each member.
//! Instances where two tracked hypotheses agree leave the pool, so at most
//! one pair can match any later prediction. At the end each pair contributes
//! its less matched member to the ground truth.

use crate::bits::{hyp_iter, HypSet, Label, LabelSet};
use crate::error::{Error, Result};
use crate::game::{Adversary, GameSpec, Prediction, Round};
use std::cell::RefCell;
use std::rc::Rc;
use std::sync::Arc;

/// Per-round bookkeeping, for checking the construction's invariants.
#[derive(Debug, Clone, Default)]
pub struct CollisionLog {
    /// Pool size before each round's choice.
    pub pool_sizes: Vec<usize>,
    /// Number of slot counters raised in each round.
    pub slot_increments: Vec<usize>,
}

#[derive(Clone)]
pub struct Collision {
    tables: Arc<Vec<Vec<Label>>>,
    window: LabelSet,
    pool: Vec<bool>,
    pairs: Vec<(usize, usize)>,
    slots: Vec<(u32, u32)>,
    excluded: HypSet,
    log: Rc<RefCell<CollisionLog>>,
}

/// `window` holds the labels the adversary may reveal.
pub fn collision_adversary(spec: &GameSpec, window: LabelSet) -> Result<Collision> {
    let tables = spec
        .hypotheses
        .tables()
        .ok_or_else(|| Error::Unsupported("collision adversary needs an explicit class".into()))?;
    Ok(Collision {
        tables: Arc::new(tables.to_vec()),
        window,
        pool: vec![true; spec.n_instances],
        pairs: Vec::new(),
        slots: Vec::new(),
        excluded: 0,
        log: Rc::new(RefCell::new(CollisionLog::default())),
    })
}

impl Collision {
    /// Shared handle to the bookkeeping log.
    pub fn log(&self) -> Rc<RefCell<CollisionLog>> {
        self.log.clone()
    }

    fn tracked(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        t.sort_unstable();
        t.dedup();
        t
    }

    fn agreeing(&self, x: usize, y: Label) -> HypSet {
        self.tables
            .iter()
            .enumerate()
            .filter(|(_, f)| f[x] == y)
            .fold(0, |m, (h, _)| m | 1 << h)
    }

    fn shrink_pool(&mut self) {
        let tracked = self.tracked();
        for (x, alive) in self.pool.iter_mut().enumerate() {
            if *alive {
                let mut seen = LabelSet::EMPTY;
                for &h in &tracked {
                    let y = self.tables[h][x];
                    if seen.contains(y) {
                        *alive = false;
                        break;
                    }
                    seen = seen.with(y);
                }
            }
        }
    }

    /// Less matched member of each pair, first member on ties.
    pub fn ground_truth(&self) -> Vec<usize> {
        self.pairs
            .iter()
            .zip(&self.slots)
            .map(|(&(a, b), &(ca, cb))| if ca <= cb { a } else { b })
            .collect()
    }
}

impl Adversary for Collision {
    fn name(&self) -> String {
        "collision".into()
    }

    fn choose_instance(&mut self, history: &[Round]) -> Result<usize> {
        let size = self.pool.iter().filter(|&&a| a).count();
        self.log.borrow_mut().pool_sizes.push(size);
        self.pool
            .iter()
            .position(|&a| a)
            .ok_or(Error::PoolExhausted(history.len()))
    }

    fn reveal(&mut self, history: &[Round], x: usize, prediction: &Prediction) -> Result<Label> {
        let p = match prediction {
            Prediction::Label(y) => *y,
            Prediction::Measure(m) => m.as_delta().ok_or_else(|| {
                Error::Unsupported("collision adversary needs label predictions".into())
            })?,
        };
        let mut raised = 0;
        for (&(a, b), c) in self.pairs.iter().zip(self.slots.iter_mut()) {
            if self.tables[a][x] == p {
                c.0 += 1;
                raised += 1;
            }
            if b != a && self.tables[b][x] == p {
                c.1 += 1;
                raised += 1;
            }
        }
        self.log.borrow_mut().slot_increments.push(raised);
        self.excluded |= self.agreeing(x, p);
        let mut blocked = LabelSet::singleton(p);
        for h in self.tracked().into_iter().chain(hyp_iter(self.excluded)) {
            blocked = blocked.with(self.tables[h][x]);
        }
        let y = self
            .window
            .iter()
            .find(|&y| !blocked.contains(y) && self.agreeing(x, y) != 0)
            .ok_or_else(|| {
                Error::LabelPoolExhausted(format!("no revealable label at round {}", history.len()))
            })?;
        let members: Vec<usize> = hyp_iter(self.agreeing(x, y)).collect();
        let pair = (members[0], *members.get(1).unwrap_or(&members[0]));
        self.pairs.push(pair);
        self.slots.push((0, 0));
        self.shrink_pool();
        Ok(y)
    }

    fn finalize_sets(&mut self, history: &[Round]) -> Result<Vec<LabelSet>> {
        let truth = self.ground_truth();
        Ok(history
            .iter()
            .map(|r| {
                truth
                    .iter()
                    .fold(LabelSet::EMPTY, |s, &h| s.with(self.tables[h][r.instance]))
            })
            .collect())
    }

    fn clone_box(&self) -> Box<dyn Adversary> {
        let mut c = self.clone();
        c.log = Rc::new(RefCell::new(self.log.borrow().clone()));
        Box::new(c)
    }
}
