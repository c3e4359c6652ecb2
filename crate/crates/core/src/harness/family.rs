//! Exhaustive families of small games, one representative per relabeling.

use crate::bits::{Label, LabelSet};
use crate::game::{build_admissible_collections, GameSpec, HypothesisClass, SetSystem};
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyBounds {
    pub max_instances: usize,
    pub max_labels: usize,
    pub max_hypotheses: usize,
    /// Only systems holding every nonempty subset.
    pub full_system_only: bool,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn relabel(s: LabelSet, perm: &[usize]) -> LabelSet {
    s.iter()
        .fold(LabelSet::EMPTY, |a, y| a.with(perm[y as usize] as Label))
}

type Key = (Vec<u64>, Vec<Vec<Label>>);

fn canonical(
    sets: &[LabelSet],
    tables: &[Vec<Label>],
    label_perms: &[Vec<usize>],
    inst_perms: &[Vec<usize>],
) -> Key {
    let mut best: Option<Key> = None;
    for lp in label_perms {
        let mut s: Vec<u64> = sets.iter().map(|&x| relabel(x, lp).0).collect();
        s.sort_unstable();
        for ip in inst_perms {
            let mut t: Vec<Vec<Label>> = tables
                .iter()
                .map(|f| {
                    let mut g = vec![0; f.len()];
                    for (x, &y) in f.iter().enumerate() {
                        g[ip[x]] = lp[y as usize] as Label;
                    }
                    g
                })
                .collect();
            t.sort();
            let key = (s.clone(), t);
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
    }
    best.unwrap()
}

fn subsets_upto(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == k {
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Every game within the bounds with at least one admissible collection, up
/// to renaming labels and instances, at horizon 1. Labels start at 2.
pub fn enumerate_family(bounds: FamilyBounds) -> Vec<GameSpec> {
    let mut out = Vec::new();
    for nx in 1..=bounds.max_instances {
        for ny in 2..=bounds.max_labels {
            let label_perms = permutations(ny);
            let inst_perms = permutations(nx);
            let subsets: Vec<LabelSet> = (1..1u64 << ny).map(LabelSet).collect();
            let n_funcs = ny.pow(nx as u32);
            let funcs: Vec<Vec<Label>> = (0..n_funcs)
                .map(|mut k| {
                    (0..nx)
                        .map(|_| {
                            let y = (k % ny) as Label;
                            k /= ny;
                            y
                        })
                        .collect()
                })
                .collect();
            let systems: Vec<Vec<LabelSet>> = if bounds.full_system_only {
                vec![subsets.clone()]
            } else {
                (1..1u64 << subsets.len())
                    .map(|m| {
                        subsets
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| m >> i & 1 == 1)
                            .map(|(_, &s)| s)
                            .collect()
                    })
                    .collect()
            };
            let classes = subsets_upto(n_funcs, bounds.max_hypotheses);
            let mut seen = BTreeSet::new();
            for sets in &systems {
                for class in &classes {
                    let tables: Vec<Vec<Label>> = class.iter().map(|&i| funcs[i].clone()).collect();
                    if !seen.insert(canonical(sets, &tables, &label_perms, &inst_perms)) {
                        continue;
                    }
                    let system = SetSystem::listed(ny, sets.clone()).expect("valid system");
                    let Ok(spec) =
                        GameSpec::new(nx, ny, system, HypothesisClass::Tables(tables), 1)
                    else {
                        continue;
                    };
                    if build_admissible_collections(&spec).is_ok() {
                        out.push(spec);
                    }
                }
            }
        }
    }
    out
}

/// The acceptance family: at most 2 instances, 3 labels and 3 hypotheses.
pub fn small_family() -> Vec<GameSpec> {
    enumerate_family(FamilyBounds {
        max_instances: 2,
        max_labels: 3,
        max_hypotheses: 3,
        full_system_only: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_counts() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(subsets_upto(4, 2).len(), 10);
    }
}
