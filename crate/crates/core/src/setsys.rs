//! Structure of a set system: Helly number, nested chains and the
//! inseparability conditions.

use crate::bits::LabelSet;
use crate::error::{Error, Result};
use crate::game::{SetFamily, SetSystem};
use serde::Serialize;

const MAX_MEMBERS: usize = 22;

fn members(system: &SetSystem) -> Result<Vec<LabelSet>> {
    let sets = system.sets()?;
    if sets.len() > MAX_MEMBERS {
        return Err(Error::BudgetExceeded {
            what: "subcollection enumeration",
            limit: 1 << MAX_MEMBERS,
        });
    }
    Ok(sets)
}

/// Intersection of every subcollection, indexed by member mask.
fn intersections(sets: &[LabelSet], universe: usize) -> Vec<LabelSet> {
    let mut inter = vec![LabelSet::full(universe); 1 << sets.len()];
    for mask in 1usize..inter.len() {
        let low = mask.trailing_zeros() as usize;
        inter[mask] = inter[mask & (mask - 1)].intersect(sets[low]);
    }
    inter
}

/// Smallest h such that every subcollection with empty intersection has an
/// empty-intersection part of size at most h. 1 when no subcollection has an
/// empty intersection.
pub fn helly_number(system: &SetSystem) -> Result<usize> {
    if let SetFamily::AllNonempty = system.family() {
        // Co-singletons form a minimal empty family of size |Y|, and a
        // minimal empty family needs a private label per member.
        return Ok(if system.universe() >= 2 {
            system.universe()
        } else {
            1
        });
    }
    let sets = members(system)?;
    let inter = intersections(&sets, system.universe());
    let mut helly = 1;
    for (mask, s) in inter.iter().enumerate().skip(1) {
        if !s.is_empty() {
            continue;
        }
        // Minimal iff dropping any single member leaves a nonempty intersection.
        let minimal = (0..sets.len())
            .filter(|i| mask >> i & 1 == 1)
            .all(|i| !inter[mask & !(1 << i)].is_empty());
        if minimal {
            helly = helly.max(mask.count_ones() as usize);
        }
    }
    Ok(helly)
}

/// A longest chain S_1 ⊇ S_2 ⊇ ... of members whose intersection lies inside
/// `tail`. `tail` stands for the labels a truncation pushed to infinity; with
/// an empty tail no chain exists, since members are nonempty.
pub fn nested_empty_chain(system: &SetSystem, tail: LabelSet) -> Result<Option<Vec<usize>>> {
    let sets = members(system)?;
    let mut order: Vec<usize> = (0..sets.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(sets[i].len()));
    // best[i]: longest chain ending (innermost) at member i.
    let mut best: Vec<Vec<usize>> = Vec::with_capacity(sets.len());
    let mut by_index = vec![Vec::new(); sets.len()];
    for &i in &order {
        let mut chain = order
            .iter()
            .take_while(|&&j| j != i)
            .filter(|&&j| sets[i].is_subset(sets[j]) && sets[i] != sets[j])
            .map(|&j| by_index[j].clone())
            .max_by_key(|c: &Vec<usize>| c.len())
            .unwrap_or_default();
        chain.push(i);
        by_index[i] = chain.clone();
        best.push(chain);
    }
    Ok(best
        .into_iter()
        .filter(|c| sets[*c.last().unwrap()].is_subset(tail))
        .max_by_key(|c| c.len()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InseparabilityReport {
    /// Every empty-intersection subcollection contains a nested chain with
    /// empty intersection.
    pub condition1_holds: bool,
    /// Every empty-intersection subcollection satisfies the chain condition or
    /// has an empty-intersection part of size at most p.
    pub condition2_holds: bool,
    pub helly: usize,
    pub truncated: bool,
    pub p: usize,
}

/// Checks both conditions over every subcollection. With `tail` nonempty the
/// system is read as a truncation and "empty" means "inside the tail".
#[allow(clippy::needless_range_loop)]
pub fn inseparability_report(
    system: &SetSystem,
    p: usize,
    tail: LabelSet,
) -> Result<InseparabilityReport> {
    let helly = helly_number(system)?;
    let sets = members(system)?;
    let m = sets.len();
    let inter = intersections(&sets, system.universe());
    let empty = |mask: usize| inter[mask].is_subset(tail);
    // Chains end at their smallest member, so a chain with empty intersection
    // exists inside C iff C holds a member inside the tail.
    let in_tail: usize = (0..m)
        .filter(|&i| sets[i].is_subset(tail))
        .fold(0, |a, i| a | 1 << i);
    // small[C]: some part of C of size <= p is empty.
    let mut small = vec![false; 1 << m];
    for mask in 1usize..1 << m {
        small[mask] = (mask.count_ones() as usize <= p && empty(mask))
            || (0..m).any(|i| mask >> i & 1 == 1 && small[mask & !(1 << i)]);
    }
    let mut c1 = true;
    let mut c12 = true;
    for mask in 1usize..1 << m {
        if !empty(mask) {
            continue;
        }
        let has_chain = mask & in_tail != 0;
        c1 &= has_chain;
        c12 &= has_chain || small[mask];
    }
    Ok(InseparabilityReport {
        condition1_holds: c1,
        condition2_holds: c12,
        helly,
        truncated: !tail.is_empty(),
        p,
    })
}

/// Truncation of the nested example: members {n, ..., M} for n = 1..M over
/// labels 0..=M, with label M standing for the infinite tail.
pub fn nested_truncation(m: usize) -> Result<(SetSystem, LabelSet)> {
    let sets = (1..=m)
        .map(|n| LabelSet::from_labels((n..=m).map(|y| y as u8)))
        .collect();
    Ok((
        SetSystem::listed(m + 1, sets)?,
        LabelSet::singleton(m as u8),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(u: usize, lists: &[&[u8]]) -> SetSystem {
        SetSystem::from_lists(u, &lists.iter().map(|l| l.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn helly_examples() {
        assert_eq!(
            helly_number(&sys(7, &[&[1, 2, 4], &[3, 4, 6], &[2, 5, 6]])).unwrap(),
            3
        );
        assert_eq!(helly_number(&sys(2, &[&[0, 1]])).unwrap(), 1);
        assert_eq!(helly_number(&sys(2, &[&[0], &[1]])).unwrap(), 2);
        assert_eq!(helly_number(&SetSystem::all_nonempty(4)).unwrap(), 4);
        assert_eq!(helly_number(&SetSystem::co_singletons(5)).unwrap(), 5);
    }

    #[test]
    fn chains() {
        assert_eq!(
            nested_empty_chain(&sys(2, &[&[0, 1], &[0]]), LabelSet::EMPTY).unwrap(),
            None
        );
        assert_eq!(
            nested_empty_chain(&sys(3, &[&[0, 1], &[1], &[0]]), LabelSet::EMPTY).unwrap(),
            None
        );
        let (s, tail) = nested_truncation(5).unwrap();
        assert_eq!(
            nested_empty_chain(&s, tail).unwrap(),
            Some(vec![0, 1, 2, 3, 4])
        );
    }

    #[test]
    fn reports() {
        let r = inseparability_report(
            &sys(7, &[&[1, 2, 4], &[3, 4, 6], &[2, 5, 6]]),
            3,
            LabelSet::EMPTY,
        )
        .unwrap();
        assert!(r.condition2_holds && !r.condition1_holds && r.helly == 3);
        let r = inseparability_report(&sys(2, &[&[0, 1]]), 1, LabelSet::EMPTY).unwrap();
        assert!(r.condition1_holds && r.condition2_holds);
        let (s, tail) = nested_truncation(6).unwrap();
        let r = inseparability_report(&s, 1, tail).unwrap();
        assert!(r.condition1_holds && r.truncated);
    }
}
