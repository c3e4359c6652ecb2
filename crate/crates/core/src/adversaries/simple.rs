use crate::bits::{HypSet, Label, LabelSet};
use crate::dims::{CollectionState, EventRule};
use crate::error::{Error, Result};
use crate::game::{collection_image, Adversary, CollectionSpace, GameSpec, Prediction, Round};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Uniformly random instances, feasible reveals and final alive type.
#[derive(Clone)]
pub struct RandomAdversary {
    space: Arc<CollectionSpace>,
    state: CollectionState,
    rng: ChaCha8Rng,
}

pub fn random_adversary(spec: &GameSpec, seed: u64) -> Result<RandomAdversary> {
    let space = Arc::new(CollectionSpace::build(spec)?);
    space.require_explicit()?;
    let state = CollectionState::full(&space);
    Ok(RandomAdversary {
        space,
        state,
        rng: ChaCha8Rng::seed_from_u64(seed),
    })
}

impl Adversary for RandomAdversary {
    fn name(&self) -> String {
        "random".into()
    }

    fn choose_instance(&mut self, _history: &[Round]) -> Result<usize> {
        Ok(self.rng.random_range(0..self.space.n_instances()))
    }

    fn reveal(&mut self, _history: &[Round], x: usize, _prediction: &Prediction) -> Result<Label> {
        let feasible: Vec<Label> = self.state.feasible(&self.space, x).iter().collect();
        let y = feasible[self.rng.random_range(0..feasible.len())];
        self.state = self.state.child(&self.space, x, |_| false, y);
        Ok(y)
    }

    fn finalize_sets(&mut self, history: &[Round]) -> Result<Vec<LabelSet>> {
        let ids: Vec<usize> = self.state.ids().collect();
        let id = ids[self.rng.random_range(0..ids.len())];
        Ok(history
            .iter()
            .map(|r| self.space.image(id, r.instance))
            .collect())
    }

    fn clone_box(&self) -> Box<dyn Adversary> {
        Box::new(self.clone())
    }
}

/// A fixed collection of hypotheses generating every set, played on a fixed
/// instance sequence. Commits each set during the round and reveals a label
/// of it other than the prediction when there is one.
#[derive(Debug, Clone)]
pub struct FixedCollection {
    images: Vec<LabelSet>,
    instances: Vec<usize>,
}

pub fn fixed_collection_adversary(
    spec: &GameSpec,
    mask: HypSet,
    instances: Vec<usize>,
) -> Result<FixedCollection> {
    let n = spec
        .n_hypotheses()
        .ok_or_else(|| Error::Unsupported("fixed collection needs an explicit class".into()))?;
    if mask == 0 || (n < 128 && mask >> n != 0) {
        return Err(Error::InvalidSpec("collection mask out of range".into()));
    }
    if instances.len() < spec.horizon || instances.iter().any(|&x| x >= spec.n_instances) {
        return Err(Error::InvalidSpec(
            "instance sequence does not cover the horizon".into(),
        ));
    }
    let images: Vec<LabelSet> = (0..spec.n_instances)
        .map(|x| collection_image(spec, mask, x))
        .collect();
    if !images.iter().all(|&s| spec.set_system.contains(s)) {
        return Err(Error::InvalidSpec("collection is not admissible".into()));
    }
    Ok(FixedCollection { images, instances })
}

impl Adversary for FixedCollection {
    fn name(&self) -> String {
        "fixed_collection".into()
    }

    fn choose_instance(&mut self, history: &[Round]) -> Result<usize> {
        Ok(self.instances[history.len()])
    }

    fn reveal(&mut self, _history: &[Round], x: usize, prediction: &Prediction) -> Result<Label> {
        let s = self.images[x];
        let avoid = prediction
            .label()
            .map_or(LabelSet::EMPTY, LabelSet::singleton);
        Ok(s.iter()
            .find(|&y| !avoid.contains(y))
            .or(s.min())
            .expect("admissible sets are nonempty"))
    }

    fn commit_set(
        &mut self,
        _h: &[Round],
        x: usize,
        _p: &Prediction,
        _y: Label,
    ) -> Result<Option<LabelSet>> {
        Ok(Some(self.images[x]))
    }

    fn finalize_sets(&mut self, history: &[Round]) -> Result<Vec<LabelSet>> {
        Ok(history.iter().map(|r| self.images[r.instance]).collect())
    }

    fn clone_box(&self) -> Box<dyn Adversary> {
        Box::new(self.clone())
    }
}

/// Rule used to count events of a finished transcript against a type.
pub fn counts_against(rule: EventRule, rounds: &[Round], images: &[LabelSet]) -> usize {
    rounds
        .iter()
        .filter(|r| rule.is_event(&r.prediction, images[r.instance]))
        .count()
}
