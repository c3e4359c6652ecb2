//! Bitmask sets over labels and hypotheses.

use serde::{Deserialize, Serialize};
use std::fmt;

pub type Label = u8;

/// Hypothesis subsets, up to 128 hypotheses.
pub type HypSet = u128;

pub const MAX_LABELS: usize = 64;
pub const MAX_HYPOTHESES: usize = 128;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LabelSet(pub u64);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);

    pub fn singleton(y: Label) -> Self {
        LabelSet(1u64 << y)
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            LabelSet(u64::MAX)
        } else {
            LabelSet((1u64 << n) - 1)
        }
    }

    pub fn from_labels<I: IntoIterator<Item = Label>>(labels: I) -> Self {
        labels.into_iter().fold(LabelSet::EMPTY, |s, y| s.with(y))
    }

    pub fn contains(self, y: Label) -> bool {
        (y as usize) < 64 && self.0 >> y & 1 == 1
    }

    pub fn with(self, y: Label) -> Self {
        LabelSet(self.0 | 1u64 << y)
    }

    pub fn without(self, y: Label) -> Self {
        LabelSet(self.0 & !(1u64 << y))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, o: Self) -> Self {
        LabelSet(self.0 | o.0)
    }

    pub fn intersect(self, o: Self) -> Self {
        LabelSet(self.0 & o.0)
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn complement(self, n: usize) -> Self {
        LabelSet(!self.0 & LabelSet::full(n).0)
    }

    pub fn min(self) -> Option<Label> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as Label)
    }

    pub fn iter(self) -> impl Iterator<Item = Label> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let y = rest.trailing_zeros() as Label;
            rest &= rest - 1;
            Some(y)
        })
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub fn hyp_iter(mask: HypSet) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        Some(i)
    })
}

pub fn hyp_full(n: usize) -> HypSet {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_set_ops() {
        let s = LabelSet::from_labels([0, 2, 5]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(2) && !s.contains(1));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 2, 5]);
        assert_eq!(s.complement(6), LabelSet::from_labels([1, 3, 4]));
        assert_eq!(s.min(), Some(0));
        assert!(LabelSet::singleton(2).is_subset(s));
    }

    #[test]
    fn hyp_iteration() {
        assert_eq!(hyp_iter(0b1011).collect::<Vec<_>>(), vec![0, 1, 3]);
        assert_eq!(hyp_full(3), 0b111);
        assert_eq!(hyp_full(128), u128::MAX);
    }
}
