//! Round-by-round game engine.

use super::collections::{CollectionSpace, Witness};
use super::measure::Prediction;
use super::spec::{Feedback, GameSpec, HypothesisClass, Realizability, Visibility};
use crate::bits::{Label, LabelSet};
use crate::error::{Error, Result};
use crate::Rational;
use num_traits::{One, Zero};

/// One played round as seen after the fact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Round {
    pub instance: usize,
    pub prediction: Prediction,
    pub revealed: Label,
    /// Realized draw, public visibility only.
    pub draw: Option<Label>,
    /// Set fixed during the round (set-valued, multiclass and bandit feedback).
    pub committed: Option<LabelSet>,
}

/// What the learner is shown at the end of a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Observation {
    pub revealed: Option<Label>,
    pub set: Option<LabelSet>,
    pub correct: Option<bool>,
    pub draw: Option<Label>,
}

pub trait Learner {
    fn name(&self) -> String;
    fn predict(&mut self, x: usize) -> Result<Prediction>;
    fn observe(&mut self, x: usize, obs: &Observation) -> Result<()>;
    fn clone_box(&self) -> Box<dyn Learner>;
}

pub trait Adversary {
    fn name(&self) -> String;
    fn choose_instance(&mut self, history: &[Round]) -> Result<usize>;
    fn reveal(&mut self, history: &[Round], x: usize, prediction: &Prediction) -> Result<Label>;
    /// Per-round set, required for feedback modes that show it during play.
    fn commit_set(
        &mut self,
        _history: &[Round],
        _x: usize,
        _prediction: &Prediction,
        _revealed: Label,
    ) -> Result<Option<LabelSet>> {
        Ok(None)
    }
    fn finalize_sets(&mut self, history: &[Round]) -> Result<Vec<LabelSet>>;
    fn clone_box(&self) -> Box<dyn Adversary>;
}

impl Clone for Box<dyn Learner> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}

impl Clone for Box<dyn Adversary> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub rounds: Vec<Round>,
    pub final_sets: Vec<LabelSet>,
    pub loss: Rational,
    pub comparator_loss: Rational,
    pub regret: Rational,
    pub witness: Option<Witness>,
}

impl Transcript {
    pub fn mistakes(&self) -> usize {
        self.rounds
            .iter()
            .zip(&self.final_sets)
            .filter(|(r, s)| match (r.draw, &r.prediction) {
                (Some(d), _) => !s.contains(d),
                (None, Prediction::Label(y)) => !s.contains(*y),
                (None, Prediction::Measure(_)) => false,
            })
            .count()
    }

    pub fn instances(&self) -> Vec<usize> {
        self.rounds.iter().map(|r| r.instance).collect()
    }
}

/// Result of a game: one transcript per realized draw sequence (a single
/// transcript unless visibility is public and the learner randomizes).
#[derive(Debug, Clone)]
pub struct Outcome {
    pub paths: Vec<(Rational, Transcript)>,
    pub expected_loss: Rational,
    pub expected_comparator: Rational,
    pub expected_regret: Rational,
}

impl Outcome {
    pub fn transcript(&self) -> &Transcript {
        &self.paths[0].1
    }
}

/// Plays `spec.horizon` rounds. Builds the cheapest collection space that
/// can check realizability.
pub fn play_game(
    spec: &GameSpec,
    learner: Box<dyn Learner>,
    adversary: Box<dyn Adversary>,
) -> Result<Outcome> {
    let space = match CollectionSpace::symbolic(spec) {
        Ok(s) => s,
        Err(_) => CollectionSpace::build(spec)?,
    };
    play_game_in(&space, learner, adversary)
}

pub fn play_game_in(
    space: &CollectionSpace,
    learner: Box<dyn Learner>,
    adversary: Box<dyn Adversary>,
) -> Result<Outcome> {
    let mut paths = Vec::new();
    run(
        space,
        learner,
        adversary,
        Vec::new(),
        Rational::one(),
        &mut paths,
    )?;
    let mut outcome = Outcome {
        paths: Vec::new(),
        expected_loss: Rational::zero(),
        expected_comparator: Rational::zero(),
        expected_regret: Rational::zero(),
    };
    for (p, t) in &paths {
        outcome.expected_loss += p * &t.loss;
        outcome.expected_comparator += p * &t.comparator_loss;
    }
    outcome.expected_regret = &outcome.expected_loss - &outcome.expected_comparator;
    outcome.paths = paths;
    Ok(outcome)
}

fn violation(msg: impl Into<String>) -> Error {
    Error::ProtocolViolation(msg.into())
}

fn run(
    space: &CollectionSpace,
    mut learner: Box<dyn Learner>,
    mut adversary: Box<dyn Adversary>,
    mut history: Vec<Round>,
    prob: Rational,
    out: &mut Vec<(Rational, Transcript)>,
) -> Result<()> {
    let spec = space.spec();
    let n = spec.n_labels;
    while history.len() < spec.horizon {
        let t = history.len();
        let x = adversary.choose_instance(&history)?;
        if x >= spec.n_instances {
            return Err(violation(format!("round {t}: instance {x} out of range")));
        }
        let prediction = learner.predict(x)?;
        match &prediction {
            Prediction::Label(y) if *y as usize >= n => {
                return Err(violation(format!(
                    "round {t}: predicted label {y} out of range"
                )))
            }
            Prediction::Measure(m) if m.n_labels() != n => {
                return Err(violation(format!("round {t}: measure has wrong length")))
            }
            _ => {}
        }
        let revealed = adversary.reveal(&history, x, &prediction)?;
        if revealed as usize >= n {
            return Err(violation(format!(
                "round {t}: revealed label {revealed} out of range"
            )));
        }
        let committed = match spec.protocol.feedback {
            Feedback::Partial => None,
            Feedback::Multiclass => Some(LabelSet::singleton(revealed)),
            Feedback::SetValued | Feedback::Bandit => Some(
                adversary
                    .commit_set(&history, x, &prediction, revealed)?
                    .ok_or_else(|| {
                        violation(format!(
                            "round {t}: adversary must commit a set under this feedback"
                        ))
                    })?,
            ),
        };
        if let Some(s) = committed {
            if !s.contains(revealed) || !spec.set_system.contains(s) {
                return Err(violation(format!("round {t}: committed set is invalid")));
            }
        }
        let draws: Vec<(Label, Rational)> = match (&prediction, spec.protocol.visibility) {
            (Prediction::Label(y), Visibility::Public) => vec![(*y, Rational::one())],
            (Prediction::Measure(m), Visibility::Public) => {
                m.support().iter().map(|y| (y, m.weight(y))).collect()
            }
            (_, Visibility::Oblivious) => Vec::new(),
        };
        let observe = |learner: &mut Box<dyn Learner>, draw: Option<Label>| {
            let shown = draw.or(prediction.label());
            let obs = match spec.protocol.feedback {
                Feedback::Partial | Feedback::Multiclass => Observation {
                    revealed: Some(revealed),
                    draw,
                    ..Default::default()
                },
                Feedback::SetValued => Observation {
                    set: committed,
                    draw,
                    ..Default::default()
                },
                Feedback::Bandit => {
                    let y =
                        shown.ok_or_else(|| violation("bandit feedback needs a realized label"))?;
                    Observation {
                        correct: Some(committed.unwrap().contains(y)),
                        draw,
                        ..Default::default()
                    }
                }
            };
            learner.observe(x, &obs)
        };
        if draws.len() > 1 {
            for (d, w) in draws {
                let mut l = learner.clone_box();
                observe(&mut l, Some(d))?;
                let mut h = history.clone();
                h.push(Round {
                    instance: x,
                    prediction: prediction.clone(),
                    revealed,
                    draw: Some(d),
                    committed,
                });
                run(space, l, adversary.clone_box(), h, &prob * w, out)?;
            }
            return Ok(());
        }
        let draw = draws.first().map(|(d, _)| *d);
        observe(&mut learner, draw)?;
        history.push(Round {
            instance: x,
            prediction,
            revealed,
            draw,
            committed,
        });
    }
    let sets = adversary.finalize_sets(&history)?;
    for (t, (r, s)) in history.iter().zip(&sets).enumerate() {
        if r.committed.is_some_and(|c| c != *s) {
            return Err(violation(format!(
                "round {t}: final set differs from the committed one"
            )));
        }
    }
    let transcript = build_transcript(space, history, sets)?;
    out.push((prob, transcript));
    Ok(())
}

/// Checks the transcript invariants and computes losses.
pub fn build_transcript(
    space: &CollectionSpace,
    rounds: Vec<Round>,
    final_sets: Vec<LabelSet>,
) -> Result<Transcript> {
    let spec = space.spec();
    if final_sets.len() != rounds.len() {
        return Err(violation(format!(
            "{} sets for {} rounds",
            final_sets.len(),
            rounds.len()
        )));
    }
    for (t, (r, &s)) in rounds.iter().zip(&final_sets).enumerate() {
        if !s.contains(r.revealed) {
            return Err(violation(format!(
                "round {t}: revealed label {} not in its set",
                r.revealed
            )));
        }
        if !spec.set_system.contains(s) {
            return Err(violation(format!(
                "round {t}: set {s:?} is not in the set system"
            )));
        }
        if spec.protocol.realizability == Realizability::ExistenceRealizable
            && !hit_by_some_hypothesis(spec, r.instance, s)
        {
            return Err(violation(format!(
                "round {t}: no hypothesis outputs a label of {s:?}"
            )));
        }
    }
    let loss = rounds
        .iter()
        .zip(&final_sets)
        .map(|(r, &s)| match r.draw {
            Some(d) => Rational::from_integer((!s.contains(d) as u8).into()),
            None => r.prediction.loss(s),
        })
        .fold(Rational::zero(), |a, b| a + b);
    let mut transcript = Transcript {
        rounds,
        final_sets,
        loss,
        comparator_loss: Rational::zero(),
        regret: Rational::zero(),
        witness: None,
    };
    let (comparator, witness) = match comparator_with_witness(&transcript, space) {
        Err(Error::RealizabilityViolation) => {
            return Err(violation(
                "final sets are not generated by any admissible collection",
            ))
        }
        other => other?,
    };
    transcript.regret = &transcript.loss - &comparator;
    transcript.comparator_loss = comparator;
    transcript.witness = witness;
    Ok(transcript)
}

fn hit_by_some_hypothesis(spec: &GameSpec, x: usize, s: LabelSet) -> bool {
    match &spec.hypotheses {
        HypothesisClass::Tables(t) => t.iter().any(|f| s.contains(f[x])),
        HypothesisClass::AllFunctions => !s.is_empty(),
    }
}

pub fn comparator_loss(transcript: &Transcript, space: &CollectionSpace) -> Result<Rational> {
    comparator_with_witness(transcript, space).map(|(c, _)| c)
}

fn comparator_with_witness(
    transcript: &Transcript,
    space: &CollectionSpace,
) -> Result<(Rational, Option<Witness>)> {
    let xs = transcript.instances();
    match space.spec().protocol.realizability {
        Realizability::SetRealizable => {
            let w = space
                .find_realizing(&xs, &transcript.final_sets)
                .ok_or(Error::RealizabilityViolation)?;
            Ok((Rational::zero(), Some(w)))
        }
        Realizability::ExistenceRealizable | Realizability::Agnostic => {
            let best = space.best_hypothesis_loss(&xs, &transcript.final_sets);
            Ok((Rational::from_integer(best.into()), None))
        }
    }
}
