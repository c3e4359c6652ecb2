//! Adversaries from the separation examples.

use crate::bits::{Label, LabelSet};
use crate::error::{Error, Result};
use crate::game::{Adversary, Measure, Prediction, Round};
use crate::games::ParityGame;
use crate::Rational;
use num_traits::One;

fn measure_of(p: &Prediction, n_labels: usize) -> Measure {
    p.as_measure(n_labels)
}

fn delta_of(p: &Prediction) -> Result<Label> {
    match p {
        Prediction::Label(y) => Ok(*y),
        Prediction::Measure(m) => m
            .as_delta()
            .ok_or_else(|| Error::Unsupported("this adversary needs label predictions".into())),
    }
}

/// Two constants over round-indexed instances. Reveals the label carrying
/// less mass (1 on ties) and finalizes against the constant the learner
/// leaned towards less often.
#[derive(Debug, Clone)]
pub struct AgnosticTwoConstant {
    horizon: usize,
}

pub fn agnostic_two_constant_adversary(horizon: usize) -> AgnosticTwoConstant {
    AgnosticTwoConstant { horizon }
}

impl AgnosticTwoConstant {
    /// Index of the constant used as comparator: the one with fewer rounds
    /// against it, lowest on ties.
    pub fn comparator(&self, history: &[Round]) -> Label {
        let half = Rational::new(1.into(), 2.into());
        let q = history
            .iter()
            .filter(|r| measure_of(&r.prediction, 2).weight(0) >= half)
            .count();
        if q <= self.horizon - q {
            0
        } else {
            1
        }
    }
}

impl Adversary for AgnosticTwoConstant {
    fn name(&self) -> String {
        "agnostic_two_constant".into()
    }

    fn choose_instance(&mut self, history: &[Round]) -> Result<usize> {
        Ok(history.len())
    }

    fn reveal(&mut self, _history: &[Round], _x: usize, prediction: &Prediction) -> Result<Label> {
        let m = measure_of(prediction, 2);
        Ok(if m.weight(0) < m.weight(1) { 0 } else { 1 })
    }

    fn finalize_sets(&mut self, history: &[Round]) -> Result<Vec<LabelSet>> {
        let k = self.comparator(history);
        let both = LabelSet::full(2);
        Ok(history
            .iter()
            .map(|r| {
                let m = measure_of(&r.prediction, 2);
                let (wk, wo) = (m.weight(k), m.weight(1 - k));
                if wo > wk {
                    LabelSet::singleton(k)
                } else if wk > wo || k == 0 {
                    both
                } else {
                    LabelSet::singleton(1)
                }
            })
            .collect())
    }

    fn clone_box(&self) -> Box<dyn Adversary> {
        Box::new(self.clone())
    }
}

/// Public-visibility cube adversary: reveals the lightest label, which must
/// carry mass at most 1 - k, and after seeing each draw excludes it from
/// the round's set unless the draw hit the revealed label.
#[derive(Debug, Clone)]
pub struct PublicCube {
    n_labels: usize,
    k: Rational,
}

pub fn public_cube_adversary(n_labels: usize, k: Rational) -> Result<PublicCube> {
    if k < Rational::from_integer(0.into()) || k > Rational::one() {
        return Err(Error::InvalidSpec("k must lie in [0, 1]".into()));
    }
    Ok(PublicCube { n_labels, k })
}

impl Adversary for PublicCube {
    fn name(&self) -> String {
        "public_cube".into()
    }

    fn choose_instance(&mut self, history: &[Round]) -> Result<usize> {
        Ok(history.len())
    }

    fn reveal(&mut self, history: &[Round], _x: usize, prediction: &Prediction) -> Result<Label> {
        let m = measure_of(prediction, self.n_labels);
        let y = (0..self.n_labels as Label)
            .min_by_key(|&y| m.weights()[y as usize])
            .unwrap();
        if m.weight(y) > Rational::one() - &self.k {
            return Err(Error::LabelPoolExhausted(format!(
                "round {}: every label carries more than 1 - k",
                history.len()
            )));
        }
        Ok(y)
    }

    fn finalize_sets(&mut self, history: &[Round]) -> Result<Vec<LabelSet>> {
        let full = LabelSet::full(self.n_labels);
        history
            .iter()
            .map(|r| {
                let excluded = match r.draw.or(r.prediction.label()) {
                    Some(d) if d != r.revealed => d,
                    Some(d) => full
                        .without(d)
                        .min()
                        .ok_or_else(|| Error::Unsupported("cube needs two labels".into()))?,
                    // No draw seen: exclude the heaviest other label.
                    None => {
                        let m = measure_of(&r.prediction, self.n_labels);
                        full.without(r.revealed)
                            .iter()
                            .max_by_key(|&y| (m.weights()[y as usize], std::cmp::Reverse(y)))
                            .ok_or_else(|| Error::Unsupported("cube needs two labels".into()))?
                    }
                };
                Ok(full.without(excluded))
            })
            .collect()
    }

    fn clone_box(&self) -> Box<dyn Adversary> {
        Box::new(self.clone())
    }
}

/// Prefix-parity adversary: instance t in round t, reveals the half label
/// opposite to a predicted half label and +1/2 against integers, and
/// finalizes S_t = {c, revealed} for an integer c never predicted.
#[derive(Debug, Clone)]
pub struct PrefixParity {
    game: ParityGame,
}

pub fn pf_not_sv_adversary(game: &ParityGame) -> PrefixParity {
    PrefixParity { game: game.clone() }
}

/// How the ground truth was assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityTruth {
    /// {f_c, g_c} for one c matching the sign pattern.
    Shared(u64),
    /// {f_c1, g_c2}: no c within the integer cap matched.
    Split(u64, u64),
}

impl PrefixParity {
    /// Low bits of every c whose parity function matches the reveals.
    pub fn pattern(&self, history: &[Round]) -> u64 {
        let mut prev = self.game.plus();
        let mut c = 0u64;
        for (j, r) in history.iter().enumerate() {
            if r.revealed != prev {
                c |= 1 << j;
            }
            prev = r.revealed;
        }
        c
    }

    pub fn truth(&self, history: &[Round]) -> Result<ParityTruth> {
        let predicted: Vec<u64> = history
            .iter()
            .filter_map(|r| r.prediction.label())
            .filter(|&y| !self.game.is_half(y))
            .map(|y| y as u64 + 1)
            .collect();
        let cap = self.game.int_cap as u64;
        let modulus = 1u64 << self.game.horizon;
        let low = self.pattern(history);
        let fresh = |c: &u64| !predicted.contains(c);
        let shared = (1..=cap).filter(|c| c % modulus == low).find(fresh);
        if let Some(c) = shared {
            return Ok(ParityTruth::Shared(c));
        }
        let c1 = (1..=cap)
            .find(fresh)
            .ok_or_else(|| Error::LabelPoolExhausted("every integer label was predicted".into()))?;
        let c2 = if low == 0 { modulus } else { low };
        Ok(ParityTruth::Split(c1, c2))
    }
}

impl Adversary for PrefixParity {
    fn name(&self) -> String {
        "pf_not_sv".into()
    }

    fn choose_instance(&mut self, history: &[Round]) -> Result<usize> {
        Ok(history.len())
    }

    fn reveal(&mut self, _history: &[Round], _x: usize, prediction: &Prediction) -> Result<Label> {
        let p = delta_of(prediction)?;
        Ok(if p == self.game.plus() {
            self.game.minus()
        } else {
            self.game.plus()
        })
    }

    fn finalize_sets(&mut self, history: &[Round]) -> Result<Vec<LabelSet>> {
        let c = match self.truth(history)? {
            ParityTruth::Shared(c) | ParityTruth::Split(c, _) => c,
        };
        let int = self.game.int_label(c);
        Ok(history
            .iter()
            .map(|r| LabelSet::from_labels([int, r.revealed]))
            .collect())
    }

    fn clone_box(&self) -> Box<dyn Adversary> {
        Box::new(self.clone())
    }
}
