use crate::bits::{hyp_full, hyp_iter, HypSet, Label, LabelSet};
use crate::dims::{CollectionState, EventRule};
use crate::error::{Error, Result};
use crate::game::{CollectionSpace, GameSpec, HypothesisClass, Prediction};
use std::sync::Arc;

/// Collections of hypotheses still consistent with every reveal.
#[derive(Debug, Clone)]
pub enum VersionSpace {
    /// Alive collection types of an explicit space, with event counts.
    Explicit {
        space: Arc<CollectionSpace>,
        state: CollectionState,
    },
    /// Every nonempty subset of a finite class is admissible, so a
    /// collection is alive iff it meets each group {f : f(x_s) = y_s}.
    Hitting {
        tables: Arc<Vec<Vec<Label>>>,
        n_labels: usize,
        groups: Vec<HypSet>,
    },
}

impl VersionSpace {
    pub fn new(spec: &GameSpec) -> Result<Self> {
        match &spec.hypotheses {
            HypothesisClass::Tables(t) if spec.set_system.is_all_nonempty() => {
                Ok(VersionSpace::Hitting {
                    tables: Arc::new(t.clone()),
                    n_labels: spec.n_labels,
                    groups: vec![hyp_full(t.len())],
                })
            }
            _ => {
                let space = Arc::new(CollectionSpace::build(spec)?);
                space.require_explicit()?;
                Ok(Self::explicit(space))
            }
        }
    }

    pub fn explicit(space: Arc<CollectionSpace>) -> Self {
        let state = CollectionState::full(&space);
        VersionSpace::Explicit { space, state }
    }

    fn agreeing(tables: &[Vec<Label>], x: usize, y: Label) -> HypSet {
        tables
            .iter()
            .enumerate()
            .filter(|(_, f)| f[x] == y)
            .fold(0, |m, (h, _)| m | 1 << h)
    }

    /// Labels inside every alive image at `x`.
    pub fn safe_labels(&self, x: usize) -> LabelSet {
        match self {
            VersionSpace::Explicit { space, state } => state.common(space, x),
            VersionSpace::Hitting {
                tables,
                n_labels,
                groups,
            } => (0..*n_labels as Label)
                .filter(|&y| {
                    let agree = Self::agreeing(tables, x, y);
                    groups.iter().any(|&g| g & !agree == 0)
                })
                .fold(LabelSet::EMPTY, |s, y| s.with(y)),
        }
    }

    /// Labels some alive collection outputs at `x`.
    pub fn feasible(&self, x: usize) -> LabelSet {
        match self {
            VersionSpace::Explicit { space, state } => state.feasible(space, x),
            // Any label some hypothesis outputs can be added to a live
            // collection.
            VersionSpace::Hitting { tables, .. } => {
                tables.iter().fold(LabelSet::EMPTY, |s, f| s.with(f[x]))
            }
        }
    }

    /// Prunes on a reveal; counts an event for `prediction` under `rule`.
    pub fn update(
        &mut self,
        x: usize,
        prediction: &Prediction,
        rule: EventRule,
        y: Label,
    ) -> Result<()> {
        match self {
            VersionSpace::Explicit { space, state } => {
                *state = state.child(space, x, |img| rule.is_event(prediction, img), y);
                if state.is_empty() {
                    return Err(Error::EmptyConsistentSet);
                }
            }
            VersionSpace::Hitting { tables, groups, .. } => {
                let g = Self::agreeing(tables, x, y);
                if g == 0 {
                    return Err(Error::EmptyConsistentSet);
                }
                groups.push(g);
            }
        }
        Ok(())
    }

    pub fn state(&self) -> Option<&CollectionState> {
        match self {
            VersionSpace::Explicit { state, .. } => Some(state),
            VersionSpace::Hitting { .. } => None,
        }
    }
}

/// Hypotheses outputting `y` at `x`.
pub fn agreeing_set(tables: &[Vec<Label>], x: usize, y: Label) -> HypSet {
    VersionSpace::agreeing(tables, x, y)
}

/// Number of hypotheses per label at `x`.
pub fn label_votes(tables: &[Vec<Label>], n_labels: usize, x: usize) -> Vec<usize> {
    let mut votes = vec![0; n_labels];
    for f in tables {
        votes[f[x] as usize] += 1;
    }
    votes
}

pub(crate) fn popcount(h: HypSet) -> usize {
    hyp_iter(h).count()
}
