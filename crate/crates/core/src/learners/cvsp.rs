use super::version_space::{agreeing_set, label_votes, popcount, VersionSpace};
use crate::bits::{HypSet, Label};
use crate::dims::EventRule;
use crate::error::{Error, Result};
use crate::game::{GameSpec, HypothesisClass, Learner, Observation, Prediction, Transcript};
use crate::Rational;
use std::sync::Arc;

/// Predicts a label shared by every alive collection when one exists,
/// otherwise the label most hypotheses output.
#[derive(Debug, Clone)]
pub struct Cvsp {
    vs: VersionSpace,
    tables: Option<Arc<Vec<Vec<Label>>>>,
    n_labels: usize,
}

pub fn cvsp_learner(spec: &GameSpec) -> Result<Cvsp> {
    let tables = spec.hypotheses.tables().map(|t| Arc::new(t.to_vec()));
    Ok(Cvsp {
        vs: VersionSpace::new(spec)?,
        tables,
        n_labels: spec.n_labels,
    })
}

impl Cvsp {
    pub fn version_space(&self) -> &VersionSpace {
        &self.vs
    }

    fn plurality(&self, x: usize) -> Label {
        match &self.tables {
            Some(t) => {
                let votes = label_votes(t, self.n_labels, x);
                let best = *votes.iter().max().unwrap();
                votes.iter().position(|&v| v == best).unwrap() as Label
            }
            // Every label is output by equally many functions.
            None => 0,
        }
    }
}

impl Learner for Cvsp {
    fn name(&self) -> String {
        "cvsp".into()
    }

    fn predict(&mut self, x: usize) -> Result<Prediction> {
        let y = self
            .vs
            .safe_labels(x)
            .min()
            .unwrap_or_else(|| self.plurality(x));
        Ok(Prediction::Label(y))
    }

    fn observe(&mut self, x: usize, obs: &Observation) -> Result<()> {
        let y = obs
            .revealed
            .ok_or_else(|| Error::ProtocolViolation("cvsp needs a revealed label".into()))?;
        self.vs
            .update(x, &Prediction::Label(0), EventRule::Mistake, y)
    }

    fn clone_box(&self) -> Box<dyn Learner> {
        Box::new(self.clone())
    }
}

/// For each mistake round of a transcript, the hypotheses agreeing with the
/// revealed label.
pub fn mistake_groups(spec: &GameSpec, transcript: &Transcript) -> Result<Vec<HypSet>> {
    let HypothesisClass::Tables(tables) = &spec.hypotheses else {
        return Err(Error::Unsupported(
            "mistake groups need an explicit class".into(),
        ));
    };
    Ok(transcript
        .rounds
        .iter()
        .zip(&transcript.final_sets)
        .filter(|(r, s)| r.prediction.loss(**s) == Rational::from_integer(1.into()))
        .map(|(r, _)| agreeing_set(tables, r.instance, r.revealed))
        .collect())
}

/// Mistake groups are pairwise distinct and hold at most half the class.
pub fn check_mistake_groups(spec: &GameSpec, groups: &[HypSet]) -> bool {
    let n = spec.n_hypotheses().unwrap_or(0);
    groups
        .iter()
        .enumerate()
        .all(|(i, g)| popcount(*g) <= n / 2 && !groups[..i].contains(g))
}

/// Sum over i = 1..=n/2 of C(n, i).
pub fn mistake_bound(n: usize) -> u64 {
    let mut c: u64 = 1;
    let mut total = 0;
    for i in 1..=n / 2 {
        c = c * (n - i + 1) as u64 / i as u64;
        total += c;
    }
    total
}
