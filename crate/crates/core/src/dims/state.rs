use crate::bits::LabelSet;
use crate::error::{Error, Result};
use crate::game::{CollectionSpace, Prediction, Threshold};

/// How a prediction is scored against a collection's image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventRule {
    /// Label predictions; an event is a label outside the image.
    Mistake,
    /// Measure predictions; an event is mass at most 1 - gamma on the image.
    Scale(Threshold),
}

impl EventRule {
    pub fn is_event(&self, prediction: &Prediction, image: LabelSet) -> bool {
        match (self, prediction) {
            (_, Prediction::Label(y)) => !image.contains(*y),
            (EventRule::Scale(g), Prediction::Measure(m)) => m.counts_event(image, g),
            (EventRule::Mistake, Prediction::Measure(m)) => match m.as_delta() {
                Some(y) => !image.contains(y),
                None => panic!("mistake rule applied to a non-delta measure"),
            },
        }
    }
}

/// Alive collection types with their event counts. Dead types are dropped,
/// which is safe since pruning never revives a collection.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CollectionState {
    entries: Vec<(u32, u16)>,
}

impl CollectionState {
    pub fn full(space: &CollectionSpace) -> Self {
        CollectionState {
            entries: (0..space.len() as u32).map(|id| (id, 0)).collect(),
        }
    }

    pub fn from_entries(entries: Vec<(u32, u16)>) -> Self {
        CollectionState { entries }
    }

    /// State after a played prefix: alive iff consistent with every reveal,
    /// count = number of prefix events.
    pub fn from_prefix(
        space: &CollectionSpace,
        rule: EventRule,
        xs: &[usize],
        predictions: &[Prediction],
        reveals: &[u8],
    ) -> Result<Self> {
        if xs.len() != predictions.len() || xs.len() != reveals.len() {
            return Err(Error::InvalidSpec("prefix lists differ in length".into()));
        }
        let mut state = Self::full(space);
        for ((&x, p), &y) in xs.iter().zip(predictions).zip(reveals) {
            state = state.child(space, x, |img| rule.is_event(p, img), y);
        }
        if state.is_empty() {
            return Err(Error::EmptyConsistentSet);
        }
        Ok(state)
    }

    pub fn entries(&self) -> &[(u32, u16)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn max_count(&self) -> u32 {
        self.entries.iter().map(|e| e.1 as u32).max().unwrap_or(0)
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|e| e.0 as usize)
    }

    /// Lowest id among alive types with the largest count.
    pub fn argmax_count(&self) -> Option<usize> {
        let m = self.max_count();
        self.entries
            .iter()
            .find(|e| e.1 as u32 == m)
            .map(|e| e.0 as usize)
    }

    /// Union of alive images at `x`: the feasible reveals.
    pub fn feasible(&self, space: &CollectionSpace, x: usize) -> LabelSet {
        self.ids()
            .fold(LabelSet::EMPTY, |s, id| s.union(space.image(id, x)))
    }

    /// Labels inside every alive image at `x`.
    pub fn common(&self, space: &CollectionSpace, x: usize) -> LabelSet {
        self.ids().fold(LabelSet::full(space.n_labels()), |s, id| {
            s.intersect(space.image(id, x))
        })
    }

    pub fn child(
        &self,
        space: &CollectionSpace,
        x: usize,
        is_event: impl Fn(LabelSet) -> bool,
        y: u8,
    ) -> Self {
        let entries = self
            .entries
            .iter()
            .filter_map(|&(id, c)| {
                let img = space.image(id as usize, x);
                img.contains(y).then(|| (id, c + is_event(img) as u16))
            })
            .collect();
        CollectionState { entries }
    }
}
