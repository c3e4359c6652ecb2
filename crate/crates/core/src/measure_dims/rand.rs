//! Grid-restricted randomized minimax value.
//!
//! The learner picks grid measures, the adversary instances and reveals; the
//! payoff is the largest accumulated complement mass over alive types.
//! States are memoized on (alive types, accumulated numerators), which is
//! exact since the continuation depends on nothing else.

use crate::bits::LabelSet;
use crate::dims::{state_budget, CollectionState};
use crate::error::{Error, Result};
use crate::game::{CollectionSpace, Measure};
use crate::Rational;
use rustc_hash::FxHashMap;
use std::sync::Arc;

pub struct RandSolver {
    space: Arc<CollectionSpace>,
    g: u32,
    /// Grid weights scaled to denominator g.
    grid: Vec<Vec<u32>>,
    memo: FxHashMap<Box<[u64]>, u32>,
    edge_cache: FxHashMap<Box<[LabelSet]>, Arc<Vec<Vec<u32>>>>,
    budget: u64,
}

/// Alive entries with accumulated loss numerators over g.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct LossState {
    entries: Vec<(u32, u32)>,
}

impl RandSolver {
    pub fn new(space: Arc<CollectionSpace>, grid: &[Measure], g: u32) -> Result<Self> {
        space.require_explicit()?;
        let grid = grid
            .iter()
            .map(|m| {
                let scale = g / m.denom();
                m.weights().iter().map(|w| w * scale).collect()
            })
            .collect();
        Ok(RandSolver {
            space,
            g,
            grid,
            memo: FxHashMap::default(),
            edge_cache: FxHashMap::default(),
            budget: state_budget(),
        })
    }

    /// Exact value of the `t`-round game from the start.
    pub fn value_from_root(&mut self, t: usize) -> Result<Rational> {
        let root = LossState {
            entries: (0..self.space.len() as u32).map(|id| (id, 0)).collect(),
        };
        let v = self.value(&root, t)?;
        Ok(Rational::new(v.into(), self.g.into()))
    }

    /// Value with counts of a collection state reinterpreted as losses of 0.
    pub fn value_from(&mut self, state: &CollectionState, t: usize) -> Result<Rational> {
        let s = LossState {
            entries: state.entries().iter().map(|&(id, _)| (id, 0)).collect(),
        };
        let v = self.value(&s, t)?;
        Ok(Rational::new(v.into(), self.g.into()))
    }

    fn effects(&mut self, images: &[LabelSet]) -> Arc<Vec<Vec<u32>>> {
        if let Some(e) = self.edge_cache.get(images) {
            return e.clone();
        }
        let g = self.g;
        let raw: Vec<Vec<u32>> = self
            .grid
            .iter()
            .map(|w| {
                images
                    .iter()
                    .map(|img| g - img.iter().map(|y| w[y as usize]).sum::<u32>())
                    .collect()
            })
            .collect();
        // Keep Pareto-minimal loss vectors.
        let mut out: Vec<Vec<u32>> = Vec::new();
        for (i, v) in raw.iter().enumerate() {
            if raw[..i].contains(v) {
                continue;
            }
            let dominated = raw
                .iter()
                .any(|o| o != v && o.iter().zip(v).all(|(a, b)| a <= b));
            if !dominated {
                out.push(v.clone());
            }
        }
        let out = Arc::new(out);
        self.edge_cache.insert(images.into(), out.clone());
        out
    }

    fn value(&mut self, state: &LossState, r: usize) -> Result<u32> {
        let lb = state
            .entries
            .iter()
            .map(|e| e.1)
            .max()
            .ok_or(Error::EmptyConsistentSet)?;
        if r == 0 {
            return Ok(lb);
        }
        let key: Box<[u64]> = std::iter::once(r as u64)
            .chain(
                state
                    .entries
                    .iter()
                    .map(|&(id, a)| (id as u64) << 32 | a as u64),
            )
            .collect();
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let ub = lb + self.g * r as u32;
        let n_labels = self.space.n_labels();
        let mut best = lb;
        for x in 0..self.space.n_instances() {
            if best == ub {
                break;
            }
            let mut images: Vec<LabelSet> = Vec::new();
            let of_entry: Vec<usize> = state
                .entries
                .iter()
                .map(|&(id, _)| {
                    let img = self.space.image(id as usize, x);
                    images.iter().position(|&i| i == img).unwrap_or_else(|| {
                        images.push(img);
                        images.len() - 1
                    })
                })
                .collect();
            let mut reveals: Vec<Vec<bool>> = Vec::new();
            for y in 0..n_labels as u8 {
                let a: Vec<bool> = images.iter().map(|i| i.contains(y)).collect();
                if a.iter().any(|&b| b) && !reveals.contains(&a) {
                    reveals.push(a);
                }
            }
            let reveals: Vec<Vec<bool>> = reveals
                .iter()
                .filter(|a| {
                    !reveals
                        .iter()
                        .any(|o| o != *a && a.iter().zip(o).all(|(p, q)| !*p || *q))
                })
                .cloned()
                .collect();
            let effects = self.effects(&images);
            let mut val = u32::MAX;
            for loss in effects.iter() {
                let mut m = 0;
                for alive in &reveals {
                    let entries = state
                        .entries
                        .iter()
                        .zip(&of_entry)
                        .filter(|(_, &k)| alive[k])
                        .map(|(&(id, a), &k)| (id, a + loss[k]))
                        .collect();
                    m = m.max(self.value(&LossState { entries }, r - 1)?);
                    if m >= val || m == ub {
                        break;
                    }
                }
                val = val.min(m);
                if val <= best {
                    break;
                }
            }
            best = best.max(val);
        }
        if self.memo.len() as u64 >= self.budget {
            return Err(Error::BudgetExceeded {
                what: "memoized states",
                limit: self.budget,
            });
        }
        self.memo.insert(key, best);
        Ok(best)
    }
}
