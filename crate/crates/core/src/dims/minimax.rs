//! Deterministic game value by plain backward induction over admissible
//! collections: the adversary picks an instance, the learner any label, the
//! adversary any label some alive collection allows, and at the end the
//! alive collection with the most mistakes.

use super::solver::state_budget;
use crate::bits::LabelSet;
use crate::error::{Error, Result};
use crate::game::{
    build_admissible_collections, CollectionSpace, GameSpec, HypothesisClass, Realizability,
    DEFAULT_TYPE_BUDGET,
};
use rustc_hash::FxHashMap;

struct Game {
    images: Vec<Vec<LabelSet>>,
    n_instances: usize,
    n_labels: usize,
    memo: FxHashMap<(usize, Vec<(u32, u8)>), u32>,
    budget: u64,
}

impl Game {
    fn value(&mut self, alive: &[(u32, u8)], r: usize) -> Result<u32> {
        if r == 0 {
            return Ok(alive.iter().map(|e| e.1 as u32).max().unwrap_or(0));
        }
        let key = (r, alive.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let mut best = 0;
        for x in 0..self.n_instances {
            let mut inner = u32::MAX;
            for p in 0..self.n_labels as u8 {
                let mut worst = 0;
                for y in 0..self.n_labels as u8 {
                    let child: Vec<(u32, u8)> = alive
                        .iter()
                        .filter(|&&(c, _)| self.images[c as usize][x].contains(y))
                        .map(|&(c, m)| (c, m + !self.images[c as usize][x].contains(p) as u8))
                        .collect();
                    if !child.is_empty() {
                        worst = worst.max(self.value(&child, r - 1)?);
                    }
                }
                inner = inner.min(worst);
            }
            best = best.max(inner);
        }
        if self.memo.len() as u64 >= self.budget {
            return Err(Error::BudgetExceeded {
                what: "memoized game states",
                limit: self.budget,
            });
        }
        self.memo.insert(key, best);
        Ok(best)
    }
}

/// Exact minimax number of mistakes over `t` rounds.
pub fn minimax_det_regret(spec: &GameSpec, t: usize) -> Result<u32> {
    if spec.protocol.realizability != Realizability::SetRealizable {
        return Err(Error::Unsupported(
            "deterministic minimax needs set-realizable mode".into(),
        ));
    }
    let mut images: Vec<Vec<LabelSet>> = match spec.hypotheses {
        HypothesisClass::Tables(_) => build_admissible_collections(spec)?.image_table,
        HypothesisClass::AllFunctions => {
            let space = CollectionSpace::build_explicit(spec, DEFAULT_TYPE_BUDGET)?;
            (0..space.len())
                .map(|id| space.images(id).to_vec())
                .collect()
        }
    };
    images.sort();
    images.dedup();
    let mut game = Game {
        n_instances: spec.n_instances,
        n_labels: spec.n_labels,
        memo: FxHashMap::default(),
        budget: state_budget(),
        images,
    };
    let root: Vec<(u32, u8)> = (0..game.images.len() as u32).map(|c| (c, 0)).collect();
    game.value(&root, t)
}
