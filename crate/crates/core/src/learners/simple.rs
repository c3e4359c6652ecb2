use crate::bits::{Label, LabelSet};
use crate::error::{Error, Result};
use crate::game::{GameSpec, Learner, Measure, Observation, Prediction};
use std::sync::Arc;

/// Uniform over a transversal in the first round; afterwards the lowest
/// transversal label inside every valid set containing the first reveal.
#[derive(Debug, Clone)]
pub struct HellyIntersection {
    n_labels: usize,
    transversal: LabelSet,
    sets: Arc<Vec<LabelSet>>,
    choice: Option<Label>,
    first_seen: bool,
    fell_back: bool,
}

pub fn helly_intersection_learner(
    spec: &GameSpec,
    transversal: LabelSet,
) -> Result<HellyIntersection> {
    if transversal.is_empty() || !transversal.is_subset(LabelSet::full(spec.n_labels)) {
        return Err(Error::InvalidSpec(
            "transversal must be a nonempty set of labels".into(),
        ));
    }
    Ok(HellyIntersection {
        n_labels: spec.n_labels,
        transversal,
        sets: Arc::new(spec.set_system.sets()?),
        choice: None,
        first_seen: false,
        fell_back: false,
    })
}

impl HellyIntersection {
    /// Transversal labels inside every set that contains `y`.
    pub fn intersection(&self, y: Label) -> LabelSet {
        self.sets
            .iter()
            .filter(|s| s.contains(y))
            .fold(self.transversal, |a, &s| a.intersect(s))
    }

    /// Whether the intersection came out empty and the uniform measure was
    /// kept.
    pub fn fell_back(&self) -> bool {
        self.fell_back
    }
}

impl Learner for HellyIntersection {
    fn name(&self) -> String {
        "helly_intersection".into()
    }

    fn predict(&mut self, _x: usize) -> Result<Prediction> {
        Ok(match self.choice {
            Some(y) => Prediction::Measure(Measure::delta(self.n_labels, y)),
            None => Prediction::Measure(Measure::uniform_over(self.n_labels, self.transversal)),
        })
    }

    fn observe(&mut self, _x: usize, obs: &Observation) -> Result<()> {
        if self.first_seen {
            return Ok(());
        }
        let y = obs
            .revealed
            .ok_or_else(|| Error::ProtocolViolation("learner needs a revealed label".into()))?;
        self.first_seen = true;
        match self.intersection(y).min() {
            Some(c) => self.choice = Some(c),
            None => self.fell_back = true,
        }
        Ok(())
    }

    fn clone_box(&self) -> Box<dyn Learner> {
        Box::new(self.clone())
    }
}

/// The same measure every round.
#[derive(Debug, Clone)]
pub struct Fixed {
    name: &'static str,
    prediction: Prediction,
}

impl Learner for Fixed {
    fn name(&self) -> String {
        self.name.into()
    }

    fn predict(&mut self, _x: usize) -> Result<Prediction> {
        Ok(self.prediction.clone())
    }

    fn observe(&mut self, _x: usize, _obs: &Observation) -> Result<()> {
        Ok(())
    }

    fn clone_box(&self) -> Box<dyn Learner> {
        Box::new(self.clone())
    }
}

/// Uniform over the first `t` labels (a delta when `t` is 1).
pub fn uniform_cube_learner(t: usize, n_labels: usize) -> Result<Fixed> {
    if t == 0 || t > n_labels {
        return Err(Error::InvalidSpec(format!(
            "cannot spread over {t} of {n_labels} labels"
        )));
    }
    Ok(Fixed {
        name: "uniform_cube",
        prediction: Prediction::Measure(Measure::uniform_over(n_labels, LabelSet::full(t))),
    })
}

/// Uniform over every label.
pub fn uniform_learner(n_labels: usize) -> Fixed {
    Fixed {
        name: "uniform",
        prediction: Prediction::Measure(Measure::uniform_over(n_labels, LabelSet::full(n_labels))),
    }
}

pub fn constant_learner(y: Label) -> Fixed {
    Fixed {
        name: "constant",
        prediction: Prediction::Label(y),
    }
}

/// Predicts 0 until a set is shown, then the lowest label of the first set
/// forever. Meant for set-valued feedback.
#[derive(Debug, Clone, Default)]
pub struct FirstSet {
    choice: Option<Label>,
}

pub fn first_set_learner() -> FirstSet {
    FirstSet::default()
}

impl Learner for FirstSet {
    fn name(&self) -> String {
        "first_set".into()
    }

    fn predict(&mut self, _x: usize) -> Result<Prediction> {
        Ok(Prediction::Label(self.choice.unwrap_or(0)))
    }

    fn observe(&mut self, _x: usize, obs: &Observation) -> Result<()> {
        if self.choice.is_none() {
            let s = obs.set.ok_or_else(|| {
                Error::ProtocolViolation("first_set needs set-valued feedback".into())
            })?;
            self.choice = s.min();
        }
        Ok(())
    }

    fn clone_box(&self) -> Box<dyn Learner> {
        Box::new(self.clone())
    }
}
