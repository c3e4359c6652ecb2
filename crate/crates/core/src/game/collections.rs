//! Admissible collections: explicit subset enumeration, and the deduplicated
//! image-table space that every recursion runs over.

use super::spec::{GameSpec, HypothesisClass, SetFamily};
use crate::bits::{hyp_full, hyp_iter, HypSet, LabelSet};
use crate::error::{Error, Result};
use std::collections::{HashSet, VecDeque};

pub const DEFAULT_SUBSET_BUDGET: u64 = 1 << 22;
pub const DEFAULT_TYPE_BUDGET: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Collection {
    pub mask: HypSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleCollections {
    pub collections: Vec<Collection>,
    /// `image_table[c][x]` is the image of collection `c` at instance `x`.
    pub image_table: Vec<Vec<LabelSet>>,
}

fn tables_of(spec: &GameSpec) -> Result<&[Vec<u8>]> {
    spec.hypotheses
        .tables()
        .ok_or_else(|| Error::Unsupported("subset enumeration needs an explicit class".into()))
}

pub fn collection_image(spec: &GameSpec, mask: HypSet, x: usize) -> LabelSet {
    let tables = spec.hypotheses.tables().expect("explicit class");
    hyp_iter(mask).fold(LabelSet::EMPTY, |s, h| s.with(tables[h][x]))
}

pub fn build_admissible_collections(spec: &GameSpec) -> Result<AdmissibleCollections> {
    build_admissible_collections_with_budget(spec, DEFAULT_SUBSET_BUDGET)
}

/// Every nonempty subset of H whose image lies in the set system at every
/// instance, in ascending mask order.
pub fn build_admissible_collections_with_budget(
    spec: &GameSpec,
    budget: u64,
) -> Result<AdmissibleCollections> {
    let tables = tables_of(spec)?;
    let n = tables.len();
    if n >= 64 || (1u64 << n) > budget {
        return Err(Error::BudgetExceeded {
            what: "collection enumeration",
            limit: budget,
        });
    }
    let mut collections = Vec::new();
    let mut image_table = Vec::new();
    for mask in 1..(1u128 << n) {
        let images: Vec<LabelSet> = (0..spec.n_instances)
            .map(|x| hyp_iter(mask).fold(LabelSet::EMPTY, |s, h| s.with(tables[h][x])))
            .collect();
        if images.iter().all(|&s| spec.set_system.contains(s)) {
            collections.push(Collection { mask });
            image_table.push(images);
        }
    }
    if collections.is_empty() {
        return Err(Error::AdmissibleEmpty);
    }
    Ok(AdmissibleCollections {
        collections,
        image_table,
    })
}

/// A collection found to generate a sequence of sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// Id in the explicit space, when one was built.
    pub id: Option<usize>,
    /// Hypothesis mask, for explicit classes.
    pub mask: Option<HypSet>,
    pub images: Vec<LabelSet>,
}

/// Distinct image tables of admissible collections ("collection types").
///
/// Collections with equal tables behave identically in every game, so the
/// recursions run over tables. Each table is represented by its largest
/// collection `{h : h(x) in T(x) for all x}`; ids follow ascending
/// representative mask (explicit classes) or lexicographic set choice
/// (the all-functions class).
#[derive(Debug, Clone)]
pub struct CollectionSpace {
    spec: GameSpec,
    explicit: Option<Explicit>,
}

#[derive(Debug, Clone)]
struct Explicit {
    images: Vec<LabelSet>,
    reps: Vec<Option<HypSet>>,
}

impl CollectionSpace {
    /// Builds the explicit space when it fits the budget, otherwise falls back
    /// to a symbolic space where the structure allows it.
    pub fn build(spec: &GameSpec) -> Result<Self> {
        match Self::build_explicit(spec, DEFAULT_TYPE_BUDGET) {
            Err(Error::BudgetExceeded { .. }) if Self::symbolic_supported(spec) => {
                Ok(CollectionSpace {
                    spec: spec.clone(),
                    explicit: None,
                })
            }
            other => other,
        }
    }

    fn symbolic_supported(spec: &GameSpec) -> bool {
        matches!(spec.hypotheses, HypothesisClass::AllFunctions)
            || matches!(spec.set_system.family(), SetFamily::AllNonempty)
    }

    pub fn symbolic(spec: &GameSpec) -> Result<Self> {
        if !Self::symbolic_supported(spec) {
            return Err(Error::Unsupported(
                "symbolic space for a listed system".into(),
            ));
        }
        Ok(CollectionSpace {
            spec: spec.clone(),
            explicit: None,
        })
    }

    pub fn build_explicit(spec: &GameSpec, budget: u64) -> Result<Self> {
        let explicit = match &spec.hypotheses {
            HypothesisClass::Tables(tables) => explicit_from_tables(spec, tables, budget)?,
            HypothesisClass::AllFunctions => explicit_product(spec, budget)?,
        };
        if explicit.reps.is_empty() {
            return Err(Error::AdmissibleEmpty);
        }
        Ok(CollectionSpace {
            spec: spec.clone(),
            explicit: Some(explicit),
        })
    }

    pub fn spec(&self) -> &GameSpec {
        &self.spec
    }

    pub fn n_instances(&self) -> usize {
        self.spec.n_instances
    }

    pub fn n_labels(&self) -> usize {
        self.spec.n_labels
    }

    pub fn is_explicit(&self) -> bool {
        self.explicit.is_some()
    }

    fn explicit(&self) -> &Explicit {
        self.explicit.as_ref().expect("explicit collection space")
    }

    pub fn require_explicit(&self) -> Result<()> {
        if self.explicit.is_some() {
            Ok(())
        } else {
            Err(Error::BudgetExceeded {
                what: "collection type enumeration",
                limit: DEFAULT_TYPE_BUDGET,
            })
        }
    }

    /// Number of collection types. Panics on a symbolic space.
    pub fn len(&self) -> usize {
        self.explicit().reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn image(&self, id: usize, x: usize) -> LabelSet {
        self.explicit().images[id * self.spec.n_instances + x]
    }

    pub fn images(&self, id: usize) -> &[LabelSet] {
        let n = self.spec.n_instances;
        &self.explicit().images[id * n..(id + 1) * n]
    }

    pub fn rep(&self, id: usize) -> Option<HypSet> {
        self.explicit().reps[id]
    }

    pub fn id_of_mask(&self, mask: HypSet) -> Option<usize> {
        let tables = self.spec.hypotheses.tables()?;
        let images: Vec<LabelSet> = (0..self.spec.n_instances)
            .map(|x| hyp_iter(mask).fold(LabelSet::EMPTY, |s, h| s.with(tables[h][x])))
            .collect();
        (0..self.len()).find(|&id| self.images(id) == images.as_slice())
    }

    /// Some admissible collection with image `sets[t]` at `xs[t]` for all t.
    pub fn find_realizing(&self, xs: &[usize], sets: &[LabelSet]) -> Option<Witness> {
        if let (Some(ex), HypothesisClass::Tables(_)) = (&self.explicit, &self.spec.hypotheses) {
            let id = (0..ex.reps.len())
                .find(|&id| xs.iter().zip(sets).all(|(&x, &s)| self.image(id, x) == s))?;
            return Some(Witness {
                id: Some(id),
                mask: ex.reps[id],
                images: self.images(id).to_vec(),
            });
        }
        match &self.spec.hypotheses {
            HypothesisClass::AllFunctions => {
                let mut images: Vec<Option<LabelSet>> = vec![None; self.spec.n_instances];
                for (&x, &s) in xs.iter().zip(sets) {
                    if !self.spec.set_system.contains(s) || images[x].is_some_and(|p| p != s) {
                        return None;
                    }
                    images[x] = Some(s);
                }
                let filler = first_member(&self.spec)?;
                let images = images.into_iter().map(|s| s.unwrap_or(filler)).collect();
                Some(Witness {
                    id: None,
                    mask: None,
                    images,
                })
            }
            HypothesisClass::Tables(tables) => {
                // All-nonempty system: the largest consistent collection works
                // whenever any does.
                let mask = hyp_iter(hyp_full(tables.len()))
                    .filter(|&h| xs.iter().zip(sets).all(|(&x, s)| s.contains(tables[h][x])))
                    .fold(0u128, |m, h| m | 1 << h);
                if mask == 0 {
                    return None;
                }
                let images: Vec<LabelSet> = (0..self.spec.n_instances)
                    .map(|x| hyp_iter(mask).fold(LabelSet::EMPTY, |s, h| s.with(tables[h][x])))
                    .collect();
                xs.iter()
                    .zip(sets)
                    .all(|(&x, &s)| images[x] == s)
                    .then_some(Witness {
                        id: None,
                        mask: Some(mask),
                        images,
                    })
            }
        }
    }

    /// Minimum over single hypotheses of the number of rounds missed.
    pub fn best_hypothesis_loss(&self, xs: &[usize], sets: &[LabelSet]) -> usize {
        match &self.spec.hypotheses {
            HypothesisClass::Tables(tables) => tables
                .iter()
                .map(|f| {
                    xs.iter()
                        .zip(sets)
                        .filter(|(&x, s)| !s.contains(f[x]))
                        .count()
                })
                .min()
                .unwrap_or(0),
            HypothesisClass::AllFunctions => (0..self.spec.n_instances)
                .map(|x| {
                    (0..self.spec.n_labels as u8)
                        .map(|y| {
                            xs.iter()
                                .zip(sets)
                                .filter(|(&xt, s)| xt == x && !s.contains(y))
                                .count()
                        })
                        .min()
                        .unwrap_or(0)
                })
                .sum(),
        }
    }
}

fn first_member(spec: &GameSpec) -> Option<LabelSet> {
    match spec.set_system.family() {
        SetFamily::Listed(s) => s.first().copied(),
        SetFamily::AllNonempty => Some(LabelSet::singleton(0)),
    }
}

fn explicit_from_tables(spec: &GameSpec, tables: &[Vec<u8>], budget: u64) -> Result<Explicit> {
    let nx = spec.n_instances;
    let sys = &spec.set_system;
    let singles: Vec<Vec<LabelSet>> = tables
        .iter()
        .map(|f| {
            f.iter()
                .map(|&y| LabelSet::singleton(y))
                .collect::<Vec<_>>()
        })
        .filter(|t| t.iter().all(|&s| sys.has_superset_of(s)))
        .collect();
    // Close under union with single hypotheses; a table whose image escapes
    // every member at some instance can never become admissible again.
    let mut seen: HashSet<Vec<LabelSet>> = singles.iter().cloned().collect();
    let mut queue: VecDeque<Vec<LabelSet>> = seen.iter().cloned().collect();
    while let Some(t) = queue.pop_front() {
        for s in &singles {
            let u: Vec<LabelSet> = t.iter().zip(s).map(|(a, b)| a.union(*b)).collect();
            if u.iter().all(|&img| sys.has_superset_of(img)) && !seen.contains(&u) {
                if seen.len() as u64 >= budget {
                    return Err(Error::BudgetExceeded {
                        what: "collection type enumeration",
                        limit: budget,
                    });
                }
                seen.insert(u.clone());
                queue.push_back(u);
            }
        }
    }
    let mut typed: Vec<(HypSet, Vec<LabelSet>)> = seen
        .into_iter()
        .filter(|t| t.iter().all(|&s| sys.contains(s)))
        .map(|t| {
            let mask = tables
                .iter()
                .enumerate()
                .filter(|(_, f)| (0..nx).all(|x| t[x].contains(f[x])))
                .fold(0u128, |m, (h, _)| m | 1 << h);
            (mask, t)
        })
        .collect();
    typed.sort();
    let reps = typed.iter().map(|(m, _)| Some(*m)).collect();
    let images = typed.into_iter().flat_map(|(_, t)| t).collect();
    Ok(Explicit { images, reps })
}

fn explicit_product(spec: &GameSpec, budget: u64) -> Result<Explicit> {
    let members = spec.set_system.sets()?;
    let nx = spec.n_instances;
    let count = (members.len() as u128)
        .checked_pow(nx as u32)
        .unwrap_or(u128::MAX);
    if count > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "collection type enumeration",
            limit: budget,
        });
    }
    let count = count as usize;
    let mut images = Vec::with_capacity(count * nx);
    let mut digits = vec![0usize; nx];
    for _ in 0..count {
        images.extend(digits.iter().map(|&d| members[d]));
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < members.len() {
                break;
            }
            *d = 0;
        }
    }
    Ok(Explicit {
        images,
        reps: vec![None; count],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::spec::SetSystem;

    fn consts(labels: &[u8]) -> HypothesisClass {
        HypothesisClass::Tables(labels.iter().map(|&y| vec![y]).collect())
    }

    #[test]
    fn admissible_examples() {
        let full = GameSpec::new(1, 2, SetSystem::all_nonempty(2), consts(&[0, 1]), 1).unwrap();
        let masks: Vec<_> = build_admissible_collections(&full)
            .unwrap()
            .collections
            .iter()
            .map(|c| c.mask)
            .collect();
        assert_eq!(masks, vec![0b01, 0b10, 0b11]);

        let single = GameSpec::new(1, 2, SetSystem::singletons(2), consts(&[0, 1]), 1).unwrap();
        let masks: Vec<_> = build_admissible_collections(&single)
            .unwrap()
            .collections
            .iter()
            .map(|c| c.mask)
            .collect();
        assert_eq!(masks, vec![0b01, 0b10]);

        let sys = SetSystem::from_lists(3, &[vec![0, 1], vec![1, 2]]).unwrap();
        let three = GameSpec::new(1, 3, sys, consts(&[0, 1, 2]), 1).unwrap();
        let adm = build_admissible_collections(&three).unwrap();
        let masks: Vec<_> = adm.collections.iter().map(|c| c.mask).collect();
        assert_eq!(masks, vec![0b011, 0b110]);
        assert_eq!(adm.image_table[0], vec![LabelSet::from_labels([0, 1])]);
    }

    #[test]
    fn empty_admissible() {
        let sys = SetSystem::from_lists(3, &[vec![0, 1]]).unwrap();
        let spec = GameSpec::new(1, 3, sys, consts(&[2]), 1).unwrap();
        assert_eq!(
            build_admissible_collections(&spec),
            Err(Error::AdmissibleEmpty)
        );
        assert!(matches!(
            CollectionSpace::build(&spec),
            Err(Error::AdmissibleEmpty)
        ));
    }

    #[test]
    fn space_matches_subset_enumeration() {
        let sys = SetSystem::from_lists(3, &[vec![0], vec![0, 1], vec![1, 2], vec![2]]).unwrap();
        let h = HypothesisClass::Tables(vec![vec![0, 1], vec![1, 2], vec![2, 2], vec![0, 2]]);
        let spec = GameSpec::new(2, 3, sys, h, 2).unwrap();
        let adm = build_admissible_collections(&spec).unwrap();
        let space = CollectionSpace::build(&spec).unwrap();
        let mut a: Vec<_> = adm.image_table.clone();
        a.sort();
        a.dedup();
        let mut b: Vec<_> = (0..space.len()).map(|i| space.images(i).to_vec()).collect();
        b.sort();
        assert_eq!(a, b);
        for id in 0..space.len() {
            let m = space.rep(id).unwrap();
            assert!(adm.collections.iter().any(|c| c.mask == m));
        }
    }

    #[test]
    fn product_space_and_symbolic_realizing() {
        let spec = GameSpec::new(
            2,
            3,
            SetSystem::co_singletons(3),
            HypothesisClass::AllFunctions,
            2,
        )
        .unwrap();
        let space = CollectionSpace::build(&spec).unwrap();
        assert_eq!(space.len(), 9);
        let sym = CollectionSpace::symbolic(&spec).unwrap();
        let s = LabelSet::from_labels([0, 1]);
        assert!(sym.find_realizing(&[0, 0], &[s, s]).is_some());
        assert!(sym
            .find_realizing(&[0, 0], &[s, LabelSet::from_labels([1, 2])])
            .is_none());
        assert_eq!(space.find_realizing(&[1], &[s]).unwrap().images[1], s);
    }

    #[test]
    fn symbolic_all_nonempty_realizing() {
        let h = HypothesisClass::Tables(vec![vec![0, 0], vec![1, 0], vec![1, 1]]);
        let spec = GameSpec::new(2, 2, SetSystem::all_nonempty(2), h, 2).unwrap();
        let sym = CollectionSpace::symbolic(&spec).unwrap();
        let w = sym
            .find_realizing(&[0], &[LabelSet::from_labels([0, 1])])
            .unwrap();
        assert_eq!(w.mask, Some(0b111));
        assert!(sym
            .find_realizing(&[0, 1], &[LabelSet::singleton(0), LabelSet::singleton(1)])
            .is_none());
        let explicit = CollectionSpace::build(&spec).unwrap();
        assert!(explicit
            .find_realizing(&[0, 1], &[LabelSet::singleton(0), LabelSet::singleton(1)])
            .is_none());
    }
}
