use crate::bits::{Label, LabelSet};
use crate::error::{invalid, Result};
use crate::Rational;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::fmt;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Probability vector over labels with a common integer denominator,
/// stored in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Measure {
    weights: Vec<u32>,
    denom: u32,
}

impl Measure {
    pub fn new(weights: Vec<u32>, denom: u32) -> Result<Self> {
        if denom == 0 {
            return Err(invalid("measure denominator is zero"));
        }
        if weights.iter().map(|&w| w as u64).sum::<u64>() != denom as u64 {
            return Err(invalid("measure weights do not sum to one"));
        }
        Ok(Self::reduced(weights, denom))
    }

    /// Builds a measure from rational weights summing to one.
    pub fn from_rationals(weights: &[Rational]) -> Result<Self> {
        use num_traits::{One, Signed, ToPrimitive};
        if weights.iter().any(|w| w.is_negative()) {
            return Err(invalid("negative measure weight"));
        }
        if weights
            .iter()
            .fold(Rational::from_integer(0.into()), |a, b| a + b)
            != Rational::one()
        {
            return Err(invalid("measure weights do not sum to one"));
        }
        let den = weights.iter().fold(BigInt::one(), |l, w| {
            num_integer::Integer::lcm(&l, w.denom())
        });
        let d = den
            .to_u32()
            .ok_or_else(|| invalid("measure denominator too large"))?;
        let ws = weights
            .iter()
            .map(|w| {
                (w.numer() * (&den / w.denom()))
                    .to_u32()
                    .ok_or_else(|| invalid("measure weight too large"))
            })
            .collect::<Result<Vec<u32>>>()?;
        Self::new(ws, d)
    }

    fn reduced(mut weights: Vec<u32>, denom: u32) -> Self {
        let g = weights.iter().fold(denom as u64, |g, &w| gcd(g, w as u64)) as u32;
        if g > 1 {
            weights.iter_mut().for_each(|w| *w /= g);
        }
        Measure {
            weights,
            denom: denom / g,
        }
    }

    pub fn delta(n_labels: usize, y: Label) -> Self {
        let mut weights = vec![0; n_labels];
        weights[y as usize] = 1;
        Measure { weights, denom: 1 }
    }

    pub fn uniform_over(n_labels: usize, support: LabelSet) -> Self {
        assert!(!support.is_empty(), "uniform measure over an empty set");
        let weights = (0..n_labels as Label)
            .map(|y| support.contains(y) as u32)
            .collect();
        Self::reduced(weights, support.len() as u32)
    }

    pub fn n_labels(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn denom(&self) -> u32 {
        self.denom
    }

    pub fn weight(&self, y: Label) -> Rational {
        Rational::new(
            BigInt::from(self.weights[y as usize]),
            BigInt::from(self.denom),
        )
    }

    /// Numerator of the mass of `set` over `denom()`.
    pub fn mass_num(&self, set: LabelSet) -> u64 {
        set.iter()
            .filter(|&y| (y as usize) < self.weights.len())
            .map(|y| self.weights[y as usize] as u64)
            .sum()
    }

    pub fn mass(&self, set: LabelSet) -> Rational {
        Rational::new(BigInt::from(self.mass_num(set)), BigInt::from(self.denom))
    }

    pub fn complement_mass(&self, set: LabelSet) -> Rational {
        Rational::new(
            BigInt::from(self.denom as u64 - self.mass_num(set)),
            BigInt::from(self.denom),
        )
    }

    pub fn support(&self) -> LabelSet {
        LabelSet::from_labels(
            (0..self.weights.len() as Label).filter(|&y| self.weights[y as usize] > 0),
        )
    }

    pub fn as_delta(&self) -> Option<Label> {
        (self.denom == 1).then(|| self.weights.iter().position(|&w| w == 1).unwrap() as Label)
    }

    /// Whether `mass(set) <= 1 - gamma`, or `< 1` when gamma is zero.
    pub fn counts_event(&self, set: LabelSet, gamma: &Threshold) -> bool {
        gamma.counts(self.mass_num(set), self.denom as u64)
    }
}

impl fmt::Debug for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")/{}", self.denom)
    }
}

/// A scale gamma = num/den in [0, 1], compared exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Threshold {
    num: u64,
    den: u64,
}

impl Threshold {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num > den {
            return Err(invalid(format!("scale {num}/{den} is not in [0, 1]")));
        }
        let g = gcd(num, den).max(1);
        Ok(Threshold {
            num: num / g,
            den: den / g,
        })
    }

    pub fn from_rational(r: &Rational) -> Result<Self> {
        use num_traits::ToPrimitive;
        let num = r
            .numer()
            .to_u64()
            .ok_or_else(|| invalid("scale out of range"))?;
        let den = r
            .denom()
            .to_u64()
            .ok_or_else(|| invalid("scale out of range"))?;
        Self::new(num, den)
    }

    pub fn zero() -> Self {
        Threshold { num: 0, den: 1 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    /// Event test for a mass `k/g` on a valid set.
    #[inline]
    pub fn counts(&self, k: u64, g: u64) -> bool {
        if self.num == 0 {
            k < g
        } else {
            // k/g <= 1 - a/b  <=>  k*b <= (b-a)*g
            (k as u128) * (self.den as u128) <= ((self.den - self.num) as u128) * (g as u128)
        }
    }
}

impl std::str::FromStr for Threshold {
    type Err = crate::Error;

    /// Parses `a/b` or a plain integer.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || crate::Error::Parse(format!("bad scale {s:?}"));
        let (a, b) = match s.trim().split_once('/') {
            Some((a, b)) => (
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            ),
            None => (s.trim().parse().map_err(|_| bad())?, 1),
        };
        Self::new(a, b)
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Prediction {
    Label(Label),
    Measure(Measure),
}

impl Prediction {
    /// Loss against a valid set: indicator or complement mass.
    pub fn loss(&self, set: LabelSet) -> Rational {
        match self {
            Prediction::Label(y) => Rational::from_integer(BigInt::from(!set.contains(*y) as u8)),
            Prediction::Measure(m) => m.complement_mass(set),
        }
    }

    pub fn as_measure(&self, n_labels: usize) -> Measure {
        match self {
            Prediction::Label(y) => Measure::delta(n_labels, *y),
            Prediction::Measure(m) => m.clone(),
        }
    }

    pub fn label(&self) -> Option<Label> {
        match self {
            Prediction::Label(y) => Some(*y),
            Prediction::Measure(_) => None,
        }
    }
}
