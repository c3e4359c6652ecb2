//! Reference computations written directly from the definitions, kept apart
//! from the library so that agreement means something.
#![allow(dead_code)]

use pflab_core::bits::{Label, LabelSet};
use pflab_core::game::{GameSpec, HypothesisClass, Measure};
use pflab_core::Rational;
use std::collections::{BTreeSet, HashMap};

/// Hypothesis tables, expanding "all functions" when small.
pub fn tables(spec: &GameSpec) -> Vec<Vec<Label>> {
    match &spec.hypotheses {
        HypothesisClass::Tables(t) => t.clone(),
        HypothesisClass::AllFunctions => {
            let (n, m) = (spec.n_instances, spec.n_labels);
            let total = m.pow(n as u32);
            assert!(total <= 64, "class too large for the reference oracle");
            (0..total)
                .map(|mut k| {
                    (0..n)
                        .map(|_| {
                            let y = (k % m) as Label;
                            k /= m;
                            y
                        })
                        .collect()
                })
                .collect()
        }
    }
}

/// Distinct image tables of nonempty hypothesis subsets whose image at every
/// instance is a valid set.
pub fn admissible_images(spec: &GameSpec) -> Vec<Vec<LabelSet>> {
    let t = tables(spec);
    assert!(t.len() <= 20, "too many hypotheses for subset enumeration");
    let mut out = BTreeSet::new();
    for mask in 1u32..1 << t.len() {
        let img: Vec<LabelSet> = (0..spec.n_instances)
            .map(|x| {
                let mut s = LabelSet::EMPTY;
                for (h, row) in t.iter().enumerate() {
                    if mask >> h & 1 == 1 {
                        s = s.with(row[x]);
                    }
                }
                s
            })
            .collect();
        if img.iter().all(|&s| spec.set_system.contains(s)) {
            out.insert(img);
        }
    }
    out.into_iter().collect()
}

/// The oblivious partial-feedback game played out in full: the adversary
/// picks the instance and, after the prediction, a label some alive
/// collection covers. Value = most non-membership events a surviving
/// collection carries after `d` rounds.
pub fn pfl(spec: &GameSpec, d: usize) -> u32 {
    let images = admissible_images(spec);
    if images.is_empty() {
        return 0;
    }
    let start: Vec<(usize, u32)> = (0..images.len()).map(|i| (i, 0)).collect();
    let mut memo = HashMap::new();
    pfl_rec(spec, &images, start, d, &mut memo)
}

/// Alive collections with their event counts, keyed by remaining rounds.
type GameMemo = HashMap<(Vec<(usize, u32)>, usize), u32>;

fn pfl_rec(
    spec: &GameSpec,
    images: &[Vec<LabelSet>],
    alive: Vec<(usize, u32)>,
    r: usize,
    memo: &mut GameMemo,
) -> u32 {
    if r == 0 {
        return alive.iter().map(|a| a.1).max().unwrap();
    }
    if let Some(&v) = memo.get(&(alive.clone(), r)) {
        return v;
    }
    let mut best = 0;
    for x in 0..spec.n_instances {
        let mut worst = u32::MAX;
        for yhat in 0..spec.n_labels as Label {
            let mut top = 0;
            for y in 0..spec.n_labels as Label {
                let next: Vec<(usize, u32)> = alive
                    .iter()
                    .filter(|&&(i, _)| images[i][x].contains(y))
                    .map(|&(i, c)| (i, c + !images[i][x].contains(yhat) as u32))
                    .collect();
                if !next.is_empty() {
                    top = top.max(pfl_rec(spec, images, next, r - 1, memo));
                }
            }
            worst = worst.min(top);
        }
        best = best.max(worst);
    }
    memo.insert((alive, r), best);
    best
}

/// Depth-capped Littlestone dimension over the given valid sets: a node at x
/// survives a prediction y when some set missing y keeps hypotheses alive.
pub fn littlestone(spec: &GameSpec, sets: &[LabelSet], cap: u32) -> u32 {
    let t = tables(spec);
    let all: Vec<usize> = (0..t.len()).collect();
    let mut memo = HashMap::new();
    ls_rec(spec, &t, sets, all, cap, &mut memo)
}

fn ls_rec(
    spec: &GameSpec,
    t: &[Vec<Label>],
    sets: &[LabelSet],
    v: Vec<usize>,
    cap: u32,
    memo: &mut HashMap<(Vec<usize>, u32), u32>,
) -> u32 {
    if cap == 0 {
        return 0;
    }
    if let Some(&r) = memo.get(&(v.clone(), cap)) {
        return r;
    }
    let mut best = 0;
    for x in 0..spec.n_instances {
        let mut worst = u32::MAX;
        for y in 0..spec.n_labels as Label {
            let mut top = None;
            for s in sets.iter().filter(|s| !s.contains(y)) {
                let sub: Vec<usize> = v.iter().copied().filter(|&h| s.contains(t[h][x])).collect();
                if !sub.is_empty() {
                    let d = 1 + ls_rec(spec, t, sets, sub, cap - 1, memo);
                    top = Some(top.map_or(d, |b: u32| b.max(d)));
                }
            }
            worst = worst.min(top.unwrap_or(0));
        }
        best = best.max(worst);
    }
    memo.insert((v, cap), best);
    best
}

/// Standard multiclass Littlestone dimension capped at `cap`: two distinct
/// labels at x, both nonempty, both subtrees deep.
pub fn multiclass_littlestone(spec: &GameSpec, cap: u32) -> u32 {
    fn rec(t: &[Vec<Label>], n_inst: usize, v: &[usize], cap: u32) -> u32 {
        if cap == 0 {
            return 0;
        }
        let mut best = 0;
        for x in 0..n_inst {
            let labels: BTreeSet<Label> = v.iter().map(|&h| t[h][x]).collect();
            let subs: Vec<Vec<usize>> = labels
                .iter()
                .map(|&y| v.iter().copied().filter(|&h| t[h][x] == y).collect())
                .collect();
            let depths: Vec<u32> = subs.iter().map(|s| rec(t, n_inst, s, cap - 1)).collect();
            let mut sorted = depths.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            if sorted.len() >= 2 {
                best = best.max(1 + sorted[1]);
            }
        }
        best
    }
    let t = tables(spec);
    let all: Vec<usize> = (0..t.len()).collect();
    rec(&t, spec.n_instances, &all, cap)
}

/// All members of the spec's set system.
pub fn members(spec: &GameSpec) -> Vec<LabelSet> {
    (1u64..1 << spec.n_labels)
        .map(LabelSet)
        .filter(|&s| spec.set_system.contains(s))
        .collect()
}

fn inter(sets: &[LabelSet], mask: u32, universe: usize) -> LabelSet {
    (0..sets.len())
        .filter(|i| mask >> i & 1 == 1)
        .fold(LabelSet::full(universe), |a, i| a.intersect(sets[i]))
}

/// Helly number by scanning every subcollection and every part of it.
pub fn helly(sets: &[LabelSet], universe: usize) -> usize {
    let n = sets.len();
    let mut h = 1;
    for c in 1u32..1 << n {
        if !inter(sets, c, universe).is_empty() {
            continue;
        }
        let smallest = (1u32..1 << n)
            .filter(|&p| p & !c == 0 && inter(sets, p, universe).is_empty())
            .map(|p| p.count_ones() as usize)
            .min()
            .unwrap();
        h = h.max(smallest);
    }
    h
}

/// Every empty-intersection subcollection has an empty-intersection part of
/// size at most p (valid systems have no empty member, so no nested chain
/// can end empty).
pub fn small_empty_parts(sets: &[LabelSet], universe: usize, p: usize) -> bool {
    let n = sets.len();
    (1u32..1 << n)
        .filter(|&c| inter(sets, c, universe).is_empty())
        .all(|c| {
            (1u32..1 << n).any(|q| {
                q & !c == 0 && q.count_ones() as usize <= p && inter(sets, q, universe).is_empty()
            })
        })
}

pub fn binomial_sum(n: u64) -> u64 {
    let choose = |n: u64, k: u64| (0..k).fold(1u64, |c, i| c * (n - i) / (i + 1));
    (1..=n / 2).map(|i| choose(n, i)).sum()
}

/// Best deterministic learner against the two-constant agnostic game with
/// every nonempty subset of {0, 1} valid. The learner sees only reveals, so
/// the adversary's freedom in choosing the set is carried as the set of
/// reachable (learner loss, loss of h=0, loss of h=1) vectors.
pub fn agnostic_two_constant_minimax(t: usize) -> i64 {
    type Reach = BTreeSet<(i64, i64, i64)>;
    fn rec(r: usize, reach: Reach, memo: &mut HashMap<(usize, Reach), i64>) -> i64 {
        if r == 0 {
            return reach.iter().map(|&(l, a, b)| l - a.min(b)).max().unwrap();
        }
        if let Some(&v) = memo.get(&(r, reach.clone())) {
            return v;
        }
        let sets = [
            LabelSet::from_labels([0]),
            LabelSet::from_labels([1]),
            LabelSet::from_labels([0, 1]),
        ];
        let mut best = i64::MAX;
        for yhat in 0..2u8 {
            let mut worst = i64::MIN;
            for y in 0..2u8 {
                let mut next = BTreeSet::new();
                for &(l, a, b) in &reach {
                    for s in sets.iter().filter(|s| s.contains(y)) {
                        let miss = |z: u8| !s.contains(z) as i64;
                        next.insert((l + miss(yhat), a + miss(0), b + miss(1)));
                    }
                }
                worst = worst.max(rec(r - 1, next, memo));
            }
            best = best.min(worst);
        }
        memo.insert((r, reach), best);
        best
    }
    rec(t, BTreeSet::from([(0, 0, 0)]), &mut HashMap::new())
}

fn abs(r: Rational) -> Rational {
    if r < Rational::from_integer(0.into()) {
        -r
    } else {
        r
    }
}

/// Scale selection written as a first-match search over m, with the
/// stability and jump conditions stated per pair of consecutive scales.
pub fn scale_select(measures: &[Measure], thresholds: &[Rational], sets: &[LabelSet]) -> usize {
    let n = measures.len();
    let two = Rational::from_integer(2.into());
    let off = |k: usize, s: LabelSet| measures[k].complement_mass(s);
    let close = |a: usize, b: usize| {
        sets.iter()
            .all(|&s| abs(off(a, s) - off(b, s)) <= &two * &thresholds[b.min(a)])
    };
    let far = |a: usize, b: usize| {
        sets.iter()
            .all(|&s| abs(off(a, s) - off(b, s)) >= &two * &thresholds[a.min(b)])
    };
    (1..n)
        .find(|&m| (1..m).all(|k| close(k, k - 1)) && far(m - 1, m))
        .unwrap_or(n)
}
