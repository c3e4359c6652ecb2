//! Shattering trees: explicit witnesses for a forced event count.

use super::solver::ValueSolver;
use super::state::CollectionState;
use crate::bits::{HypSet, LabelSet};
use crate::error::{Error, Result};
use crate::game::{collection_image, GameSpec, HypothesisClass, Prediction};
use serde::{Deserialize, Serialize};

/// Number of prefixes shorter than `len` over an alphabet of size `n`.
pub fn prefixes_below(n: usize, len: usize) -> usize {
    (0..len).map(|l| n.pow(l as u32)).sum()
}

/// Position of a prefix among all prefixes, shortest first, each length in
/// lexicographic order.
pub fn prefix_index(n: usize, prefix: &[u8]) -> usize {
    let rank = prefix.iter().fold(0usize, |r, &y| r * n + y as usize);
    prefixes_below(n, prefix.len()) + rank
}

/// Depth-d tree indexed by learner prediction prefixes. Node prefixes have
/// length < d, annotated edges length 1..=d, leaves length d.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShatteringTree {
    pub depth: usize,
    pub n_labels: usize,
    pub q: u32,
    /// Instance at each node, by `prefix_index`.
    pub nodes: Vec<usize>,
    /// Revealed label on each edge, by `prefix_index(prefix) - 1`.
    pub annotations: Vec<u8>,
    /// Witness image table at each leaf, by leaf rank.
    pub witnesses: Vec<Vec<LabelSet>>,
    /// Hypothesis masks of the witnesses, for explicit classes.
    pub witness_masks: Vec<Option<HypSet>>,
}

impl ShatteringTree {
    pub fn node(&self, prefix: &[u8]) -> usize {
        self.nodes[prefix_index(self.n_labels, prefix)]
    }

    pub fn annotation(&self, prefix: &[u8]) -> u8 {
        self.annotations[prefix_index(self.n_labels, prefix) - 1]
    }

    pub fn leaf(&self, prefix: &[u8]) -> &[LabelSet] {
        let rank = prefix_index(self.n_labels, prefix) - prefixes_below(self.n_labels, self.depth);
        &self.witnesses[rank]
    }

    /// Walks every leaf path.
    pub fn leaf_paths(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        let n = self.n_labels;
        (0..n.pow(self.depth as u32)).map(move |mut rank| {
            let mut p = vec![0u8; self.depth];
            for slot in p.iter_mut().rev() {
                *slot = (rank % n) as u8;
                rank /= n;
            }
            p
        })
    }

    /// Checks the tree against the spec: witnesses admissible, annotations
    /// inside witness images, and at least `q` events on every path.
    pub fn verify(&self, spec: &GameSpec) -> Result<()> {
        let bad = |m: String| Err(Error::TreeSpecMismatch(m));
        let n = self.n_labels;
        if n != spec.n_labels {
            return bad(format!("tree has {n} labels, spec has {}", spec.n_labels));
        }
        if self.nodes.len() != prefixes_below(n, self.depth)
            || self.annotations.len() != prefixes_below(n, self.depth + 1) - 1
            || self.witnesses.len() != n.pow(self.depth as u32)
            || self.witness_masks.len() != self.witnesses.len()
        {
            return bad("tree arrays have the wrong size".into());
        }
        if self.nodes.iter().any(|&x| x >= spec.n_instances) {
            return bad("node instance out of range".into());
        }
        if self.annotations.iter().any(|&y| y as usize >= n) {
            return bad("annotation label out of range".into());
        }
        for (w, mask) in self.witnesses.iter().zip(&self.witness_masks) {
            if w.len() != spec.n_instances || !w.iter().all(|&s| spec.set_system.contains(s)) {
                return bad("witness is not admissible".into());
            }
            match (&spec.hypotheses, mask) {
                (HypothesisClass::Tables(_), Some(m)) => {
                    let table: Vec<LabelSet> = (0..spec.n_instances)
                        .map(|x| collection_image(spec, *m, x))
                        .collect();
                    if *m == 0 || &table != w {
                        return bad("witness mask does not generate its table".into());
                    }
                }
                (HypothesisClass::Tables(_), None) => return bad("witness mask missing".into()),
                (HypothesisClass::AllFunctions, _) => {}
            }
        }
        for path in self.leaf_paths() {
            let w = self.leaf(&path);
            let mut events = 0;
            for t in 0..self.depth {
                let x = self.node(&path[..t]);
                if !w[x].contains(self.annotation(&path[..=t])) {
                    return bad(format!("annotation off the witness on path {path:?}"));
                }
                events += !w[x].contains(path[t]) as u32;
            }
            if events < self.q {
                return bad(format!(
                    "path {path:?} has {events} events, needs {}",
                    self.q
                ));
            }
        }
        Ok(())
    }
}

/// Extracts a tree certifying the solver's value at depth `d` from the root.
pub fn witness_tree(solver: &mut ValueSolver, d: usize) -> Result<ShatteringTree> {
    let space = solver.space().clone();
    let n = space.n_labels();
    let root = solver.root();
    let q = solver.value(&root, d)?;
    let mut tree = ShatteringTree {
        depth: d,
        n_labels: n,
        q,
        nodes: vec![0; prefixes_below(n, d)],
        annotations: vec![0; prefixes_below(n, d + 1) - 1],
        witnesses: vec![Vec::new(); n.pow(d as u32)],
        witness_masks: vec![None; n.pow(d as u32)],
    };
    fill(solver, &mut tree, &mut Vec::new(), &root, d, q)?;
    Ok(tree)
}

fn fill(
    solver: &mut ValueSolver,
    tree: &mut ShatteringTree,
    prefix: &mut Vec<u8>,
    state: &CollectionState,
    r: usize,
    q: u32,
) -> Result<()> {
    let space = solver.space().clone();
    let n = tree.n_labels;
    if r == 0 {
        // Leaf: an alive type with the most events meets every annotation.
        let id = state.argmax_count().ok_or(Error::EmptyConsistentSet)?;
        let rank = prefix_index(n, prefix) - prefixes_below(n, tree.depth);
        tree.witnesses[rank] = space.images(id).to_vec();
        tree.witness_masks[rank] = space.rep(id);
        return Ok(());
    }
    let mut chosen = None;
    for x in 0..space.n_instances() {
        if solver.instance_value(state, x, r)? >= q {
            chosen = Some(x);
            break;
        }
    }
    let x = chosen.ok_or_else(|| Error::TreeSpecMismatch("value not attained".into()))?;
    tree.nodes[prefix_index(n, prefix)] = x;
    for yhat in 0..n as u8 {
        let p = Prediction::Label(yhat);
        let mut reveal = None;
        for y in state.feasible(&space, x).iter() {
            if solver
                .reveal_value(state, x, &p, y, r)?
                .is_some_and(|v| v >= q)
            {
                reveal = Some(y);
                break;
            }
        }
        let y =
            reveal.ok_or_else(|| Error::TreeSpecMismatch("no reveal keeps the value".into()))?;
        prefix.push(yhat);
        tree.annotations[prefix_index(n, prefix) - 1] = y;
        let child = state.child(&space, x, |img| !img.contains(yhat), y);
        fill(solver, tree, prefix, &child, r - 1, q)?;
        prefix.pop();
    }
    Ok(())
}
