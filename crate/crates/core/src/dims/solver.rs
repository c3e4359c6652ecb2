//! Memoized minimax over collection states.
//!
//! V(s, 0) is the largest count among alive types; V(s, r) maximizes over
//! instances, minimizes over learner edges and maximizes over feasible
//! reveals. Edges and reveals only matter through the alive images at the
//! chosen instance, so both are grouped by image, and dominated choices are
//! skipped: the value is monotone in the alive set and in every count.

use super::state::{CollectionState, EventRule};
use crate::bits::LabelSet;
use crate::error::{Error, Result};
use crate::game::{CollectionSpace, Measure, Prediction, Threshold};
use rustc_hash::FxHashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

pub const DEFAULT_STATE_BUDGET: u64 = 50_000_000;

static BUDGET_OVERRIDE: AtomicU64 = AtomicU64::new(0);

/// Overrides the state budget for this process; None restores the default.
pub fn set_state_budget(budget: Option<u64>) {
    BUDGET_OVERRIDE.store(budget.unwrap_or(0), Ordering::Relaxed);
}

/// State budget: an explicit override, else `PFLAB_BUDGET_STATES`, else the
/// default.
pub fn state_budget() -> u64 {
    let o = BUDGET_OVERRIDE.load(Ordering::Relaxed);
    if o > 0 {
        return o;
    }
    std::env::var("PFLAB_BUDGET_STATES")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_STATE_BUDGET)
}

#[derive(Debug, Clone)]
pub enum EdgeSet {
    Labels,
    Grid {
        measures: Vec<Measure>,
        gamma: Threshold,
    },
}

impl EdgeSet {
    pub fn rule(&self) -> EventRule {
        match self {
            EdgeSet::Labels => EventRule::Mistake,
            EdgeSet::Grid { gamma, .. } => EventRule::Scale(*gamma),
        }
    }
}

pub struct ValueSolver {
    space: Arc<CollectionSpace>,
    edges: EdgeSet,
    memo: FxHashMap<Box<[u64]>, u16>,
    edge_cache: FxHashMap<Box<[LabelSet]>, Arc<Vec<u128>>>,
    budget: u64,
}

/// Alive entries at one instance, grouped by image.
struct Groups {
    images: Vec<LabelSet>,
    of_entry: Vec<u8>,
}

fn groups(space: &CollectionSpace, state: &CollectionState, x: usize) -> Result<Groups> {
    let mut images: Vec<LabelSet> = Vec::new();
    let mut of_entry = Vec::with_capacity(state.len());
    for id in state.ids() {
        let img = space.image(id, x);
        let k = match images.iter().position(|&i| i == img) {
            Some(k) => k,
            None => {
                if images.len() == 128 {
                    return Err(Error::BudgetExceeded {
                        what: "distinct images at one instance",
                        limit: 128,
                    });
                }
                images.push(img);
                images.len() - 1
            }
        };
        of_entry.push(k as u8);
    }
    Ok(Groups { images, of_entry })
}

/// Keeps masks not strictly containing another (`minimal`) or not strictly
/// contained in another, preserving first-occurrence order.
fn prune(masks: Vec<u128>, minimal: bool) -> Vec<u128> {
    let mut out: Vec<u128> = Vec::new();
    for (i, &m) in masks.iter().enumerate() {
        if masks[..i].contains(&m) {
            continue;
        }
        let dominated = masks
            .iter()
            .any(|&o| o != m && if minimal { o & m == o } else { o & m == m });
        if !dominated {
            out.push(m);
        }
    }
    out
}

impl ValueSolver {
    pub fn new(space: Arc<CollectionSpace>, edges: EdgeSet) -> Result<Self> {
        space.require_explicit()?;
        Ok(ValueSolver {
            space,
            edges,
            memo: FxHashMap::default(),
            edge_cache: FxHashMap::default(),
            budget: state_budget(),
        })
    }

    pub fn labels(space: Arc<CollectionSpace>) -> Result<Self> {
        Self::new(space, EdgeSet::Labels)
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn space(&self) -> &Arc<CollectionSpace> {
        &self.space
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn rule(&self) -> EventRule {
        self.edges.rule()
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn root(&self) -> CollectionState {
        CollectionState::full(&self.space)
    }

    fn key(state: &CollectionState, r: usize) -> Box<[u64]> {
        std::iter::once(r as u64)
            .chain(
                state
                    .entries()
                    .iter()
                    .map(|&(id, c)| (id as u64) << 16 | c as u64),
            )
            .collect()
    }

    /// Minimal learner edge effects (masks of counted groups).
    fn learner_effects(&mut self, images: &[LabelSet]) -> Arc<Vec<u128>> {
        if let Some(e) = self.edge_cache.get(images) {
            return e.clone();
        }
        let raw: Vec<u128> = match &self.edges {
            EdgeSet::Labels => (0..self.space.n_labels() as u8)
                .map(|y| mask_of(images, |img| !img.contains(y)))
                .collect(),
            EdgeSet::Grid { measures, gamma } => measures
                .iter()
                .map(|m| mask_of(images, |img| m.counts_event(img, gamma)))
                .collect(),
        };
        let effects = Arc::new(prune(raw, true));
        self.edge_cache.insert(images.into(), effects.clone());
        effects
    }

    fn child_of(
        state: &CollectionState,
        g: &Groups,
        counted: u128,
        alive: u128,
    ) -> CollectionState {
        let entries = state
            .entries()
            .iter()
            .zip(&g.of_entry)
            .filter(|(_, &k)| alive >> k & 1 == 1)
            .map(|(&(id, c), &k)| (id, c + (counted >> k & 1) as u16))
            .collect();
        CollectionState::from_entries(entries)
    }

    pub fn value(&mut self, state: &CollectionState, r: usize) -> Result<u32> {
        if state.is_empty() {
            return Err(Error::EmptyConsistentSet);
        }
        let lb = state.max_count();
        if r == 0 {
            return Ok(lb);
        }
        let key = Self::key(state, r);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v as u32);
        }
        let ub = lb + r as u32;
        let mut best = lb;
        for x in 0..self.space.n_instances() {
            if best == ub {
                break;
            }
            let v = self.instance_value_bounded(state, x, r, best)?;
            best = best.max(v);
        }
        if self.memo.len() as u64 >= self.budget {
            return Err(Error::BudgetExceeded {
                what: "memoized states",
                limit: self.budget,
            });
        }
        self.memo.insert(key, best as u16);
        Ok(best)
    }

    /// min over edges of max over reveals at `x`; exact when above `floor`.
    fn instance_value_bounded(
        &mut self,
        state: &CollectionState,
        x: usize,
        r: usize,
        floor: u32,
    ) -> Result<u32> {
        let g = groups(&self.space, state, x)?;
        let ub = state.max_count() + r as u32;
        let effects = self.learner_effects(&g.images);
        let reveals = reveal_masks(&g.images, self.space.n_labels());
        let mut val = u32::MAX;
        for &counted in effects.iter() {
            let mut m = 0;
            for &alive in &reveals {
                let child = Self::child_of(state, &g, counted, alive);
                m = m.max(self.value(&child, r - 1)?);
                if m >= val || m == ub {
                    break;
                }
            }
            val = val.min(m);
            if val <= floor {
                break;
            }
        }
        Ok(val)
    }

    /// Exact value of choosing instance `x` next.
    pub fn instance_value(&mut self, state: &CollectionState, x: usize, r: usize) -> Result<u32> {
        if r == 0 {
            return Ok(state.max_count());
        }
        self.instance_value_bounded(state, x, r, 0)
            .map(|v| v.max(state.max_count()))
    }

    /// Value after `prediction` at `x` and reveal `y`, with `r` rounds left
    /// including the current one. None when `y` kills every type.
    pub fn reveal_value(
        &mut self,
        state: &CollectionState,
        x: usize,
        prediction: &Prediction,
        y: u8,
        r: usize,
    ) -> Result<Option<u32>> {
        let rule = self.rule();
        let child = state.child(&self.space, x, |img| rule.is_event(prediction, img), y);
        if child.is_empty() {
            return Ok(None);
        }
        self.value(&child, r - 1).map(Some)
    }

    /// Worst case over feasible reveals of a fixed prediction.
    pub fn prediction_value(
        &mut self,
        state: &CollectionState,
        x: usize,
        prediction: &Prediction,
        r: usize,
    ) -> Result<u32> {
        let mut worst = 0;
        for y in state.feasible(&self.space, x).iter() {
            if let Some(v) = self.reveal_value(state, x, prediction, y, r)? {
                worst = worst.max(v);
            }
        }
        Ok(worst)
    }
}

fn mask_of(images: &[LabelSet], f: impl Fn(LabelSet) -> bool) -> u128 {
    images
        .iter()
        .enumerate()
        .filter(|(_, &i)| f(i))
        .fold(0u128, |m, (k, _)| m | 1 << k)
}

/// Maximal sets of groups that survive some reveal.
fn reveal_masks(images: &[LabelSet], n_labels: usize) -> Vec<u128> {
    let raw = (0..n_labels as u8)
        .map(|y| mask_of(images, |img| img.contains(y)))
        .filter(|&m| m != 0)
        .collect();
    prune(raw, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prune_keeps_extremes() {
        assert_eq!(
            prune(vec![0b011, 0b001, 0b110, 0b001], true),
            vec![0b001, 0b110]
        );
        assert_eq!(
            prune(vec![0b011, 0b001, 0b110, 0b011], false),
            vec![0b011, 0b110]
        );
    }
}
