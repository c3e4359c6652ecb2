//! Brute-force shattering-tree search, independent of the memoized solver.
//! Works from the explicit subset enumeration of admissible collections.

use super::tree::{prefixes_below, ShatteringTree};
use crate::error::{Error, Result};
use crate::game::{build_admissible_collections, GameSpec};

pub const DEFAULT_TREE_BUDGET: u64 = 1_000_000;

/// Number of candidate trees: instances on nodes times labels on edges.
pub fn tree_count(spec: &GameSpec, d: usize) -> Option<u64> {
    let n = spec.n_labels;
    let nodes = prefixes_below(n, d) as u32;
    let edges = (prefixes_below(n, d + 1) - 1) as u32;
    (spec.n_instances as u64)
        .checked_pow(nodes)?
        .checked_mul((n as u64).checked_pow(edges)?)
}

pub fn within_budget(spec: &GameSpec, d: usize, budget: u64) -> bool {
    tree_count(spec, d).is_some_and(|c| c <= budget)
}

struct Search {
    n: usize,
    d: usize,
    images: Vec<Vec<crate::bits::LabelSet>>,
    masks: Vec<u128>,
}

impl Search {
    /// Events forced by a tree: the worst leaf, taking the best consistent
    /// collection at each leaf. None if some leaf has no consistent collection.
    fn score(&self, nodes: &[usize], ann: &[u8], leaf_choice: &mut [usize]) -> Option<u32> {
        let n = self.n;
        let mut worst = u32::MAX;
        let leaves = n.pow(self.d as u32);
        for (rank, choice) in leaf_choice.iter_mut().enumerate().take(leaves) {
            // Decode the leaf path, most significant symbol first.
            let mut path = vec![0u8; self.d];
            let mut r = rank;
            for slot in path.iter_mut().rev() {
                *slot = (r % n) as u8;
                r /= n;
            }
            let mut best: Option<(u32, usize)> = None;
            'coll: for (c, img) in self.images.iter().enumerate() {
                let mut events = 0;
                let mut node = 0usize;
                for &step in &path {
                    let x = nodes[node];
                    let edge = node * n + step as usize + 1;
                    if !img[x].contains(ann[edge - 1]) {
                        continue 'coll;
                    }
                    events += !img[x].contains(step) as u32;
                    node = edge;
                }
                if best.is_none_or(|(b, _)| events > b) {
                    best = Some((events, c));
                }
            }
            let (e, c) = best?;
            *choice = c;
            worst = worst.min(e);
        }
        Some(worst)
    }
}

/// Enumerates every tree; `visit` sees the score and the tree and returns
/// true to stop.
fn enumerate(
    spec: &GameSpec,
    d: usize,
    budget: u64,
    mut visit: impl FnMut(u32, &dyn Fn() -> ShatteringTree) -> bool,
) -> Result<()> {
    if !within_budget(spec, d, budget) {
        return Err(Error::BudgetExceeded {
            what: "shattering tree enumeration",
            limit: budget,
        });
    }
    let adm = build_admissible_collections(spec)?;
    let n = spec.n_labels;
    let search = Search {
        n,
        d,
        images: adm.image_table.clone(),
        masks: adm.collections.iter().map(|c| c.mask).collect(),
    };
    let n_nodes = prefixes_below(n, d);
    let n_edges = prefixes_below(n, d + 1) - 1;
    let mut nodes = vec![0usize; n_nodes];
    let mut ann = vec![0u8; n_edges];
    let mut leaf_choice = vec![0usize; n.pow(d as u32)];
    loop {
        if let Some(score) = search.score(&nodes, &ann, &mut leaf_choice) {
            let build = || ShatteringTree {
                depth: d,
                n_labels: n,
                q: score,
                nodes: nodes.clone(),
                annotations: ann.clone(),
                witnesses: leaf_choice
                    .iter()
                    .map(|&c| search.images[c].clone())
                    .collect(),
                witness_masks: leaf_choice.iter().map(|&c| Some(search.masks[c])).collect(),
            };
            if visit(score, &build) {
                return Ok(());
            }
        }
        // Odometer over annotations, then nodes.
        let mut carry = true;
        for a in ann.iter_mut() {
            *a += 1;
            if (*a as usize) < n {
                carry = false;
                break;
            }
            *a = 0;
        }
        if carry {
            for v in nodes.iter_mut() {
                *v += 1;
                if *v < spec.n_instances {
                    carry = false;
                    break;
                }
                *v = 0;
            }
        }
        if carry {
            return Ok(());
        }
    }
}

/// A verified tree forcing at least `q` events, or None.
pub fn naive_tree_oracle(spec: &GameSpec, d: usize, q: u32) -> Result<Option<ShatteringTree>> {
    naive_tree_oracle_with_budget(spec, d, q, DEFAULT_TREE_BUDGET)
}

pub fn naive_tree_oracle_with_budget(
    spec: &GameSpec,
    d: usize,
    q: u32,
    budget: u64,
) -> Result<Option<ShatteringTree>> {
    let mut found = None;
    enumerate(spec, d, budget, |score, build| {
        if score >= q {
            let mut t = build();
            t.q = q;
            found = Some(t);
            true
        } else {
            false
        }
    })?;
    if let Some(t) = &found {
        t.verify(spec)?;
    }
    Ok(found)
}

/// Largest q any depth-d tree forces, with a tree attaining it.
pub fn naive_best(spec: &GameSpec, d: usize, budget: u64) -> Result<(u32, ShatteringTree)> {
    let mut best: Option<(u32, ShatteringTree)> = None;
    let cap = d as u32;
    enumerate(spec, d, budget, |score, build| {
        if best.as_ref().is_none_or(|(b, _)| score > *b) {
            best = Some((score, build()));
        }
        score == cap
    })?;
    best.ok_or(Error::AdmissibleEmpty)
}
