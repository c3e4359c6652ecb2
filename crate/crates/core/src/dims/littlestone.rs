//! Littlestone-type dimensions over hypothesis subsets.

use crate::bits::{hyp_full, hyp_iter, HypSet, LabelSet};
use crate::error::{Error, Result};
use crate::game::{GameSpec, SetSystem};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Singleton sets (multiclass).
    Ml,
    /// The spec's own set system.
    Sl,
    /// Co-singleton sets (bandit).
    Bl,
}

struct Ctx<'a> {
    tables: &'a [Vec<u8>],
    sets: Vec<LabelSet>,
    n_instances: usize,
    n_labels: usize,
    memo: FxHashMap<(HypSet, u32), bool>,
}

impl Ctx<'_> {
    fn restrict(&self, v: HypSet, x: usize, s: LabelSet) -> HypSet {
        hyp_iter(v)
            .filter(|&h| s.contains(self.tables[h][x]))
            .fold(0, |m, h| m | 1 << h)
    }

    /// Whether `v` shatters a tree of depth `k`.
    fn shatters(&mut self, v: HypSet, k: u32) -> bool {
        if k == 0 {
            return true;
        }
        if let Some(&b) = self.memo.get(&(v, k)) {
            return b;
        }
        let mut result = false;
        'x: for x in 0..self.n_instances {
            for y in 0..self.n_labels as u8 {
                let mut ok = false;
                for i in 0..self.sets.len() {
                    let s = self.sets[i];
                    if s.contains(y) {
                        continue;
                    }
                    let sub = self.restrict(v, x, s);
                    if sub != 0 && self.shatters(sub, k - 1) {
                        ok = true;
                        break;
                    }
                }
                if !ok {
                    continue 'x;
                }
            }
            result = true;
            break;
        }
        self.memo.insert((v, k), result);
        result
    }
}

/// Largest shattered depth up to `cap`; `cap` means "at least cap".
pub fn ml_sl_bl_dim(spec: &GameSpec, variant: Variant, cap: u32) -> Result<u32> {
    let tables = spec.hypotheses.tables().ok_or_else(|| {
        Error::Unsupported("Littlestone dimensions need an explicit class".into())
    })?;
    let system = match variant {
        Variant::Ml => SetSystem::singletons(spec.n_labels),
        Variant::Bl => SetSystem::co_singletons(spec.n_labels),
        Variant::Sl => spec.set_system.clone(),
    };
    let mut ctx = Ctx {
        tables,
        sets: system.sets()?,
        n_instances: spec.n_instances,
        n_labels: spec.n_labels,
        memo: FxHashMap::default(),
    };
    let all = hyp_full(tables.len());
    let mut k = 0;
    while k < cap && ctx.shatters(all, k + 1) {
        k += 1;
    }
    Ok(k)
}

pub fn default_cap(spec: &GameSpec) -> u32 {
    spec.horizon as u32 + 2
}
