//! Builders for the named games used by the replication suite.

use crate::bits::{Label, LabelSet};
use crate::error::Result;
use crate::game::{GameSpec, HypothesisClass, Realizability, SetSystem};

fn constants(labels: &[Label]) -> HypothesisClass {
    HypothesisClass::Tables(labels.iter().map(|&y| vec![y]).collect())
}

fn constants_over(n_instances: usize, labels: &[Label]) -> HypothesisClass {
    HypothesisClass::Tables(labels.iter().map(|&y| vec![y; n_instances]).collect())
}

/// One instance, labels {0, 1}, H = {f0 = 0, f1 = 1}, singleton sets.
pub fn two_constant_singletons(horizon: usize) -> Result<GameSpec> {
    GameSpec::new(1, 2, SetSystem::singletons(2), constants(&[0, 1]), horizon)
}

/// Same class with every nonempty subset of {0, 1} as a valid set.
pub fn two_constant_full(horizon: usize) -> Result<GameSpec> {
    GameSpec::new(
        1,
        2,
        SetSystem::all_nonempty(2),
        constants(&[0, 1]),
        horizon,
    )
}

/// All functions from `horizon` instances to {0, 1} with singleton sets.
pub fn binary_singleton(horizon: usize) -> Result<GameSpec> {
    GameSpec::new(
        horizon,
        2,
        SetSystem::singletons(2),
        HypothesisClass::AllFunctions,
        horizon,
    )
}

/// Labels 1..=6 stored as 0..=5.
pub const HELLY_SETS: [[Label; 3]; 3] = [[0, 1, 3], [2, 3, 5], [1, 4, 5]];
/// The transversal {2, 4, 6} in stored labels.
pub const HELLY_TRANSVERSAL: [Label; 3] = [1, 3, 5];

/// Six constants over `horizon` instances with the three-set system of
/// Helly number 3.
pub fn helly_six(horizon: usize) -> Result<GameSpec> {
    let sets = HELLY_SETS
        .iter()
        .map(|s| LabelSet::from_labels(s.iter().copied()))
        .collect();
    GameSpec::new(
        horizon,
        6,
        SetSystem::listed(6, sets)?,
        constants_over(horizon, &[0, 1, 2, 3, 4, 5]),
        horizon,
    )
}

/// All functions from `horizon` instances to `m` labels, co-singleton sets.
pub fn cube(horizon: usize, m: usize) -> Result<GameSpec> {
    GameSpec::new(
        horizon,
        m,
        SetSystem::co_singletons(m),
        HypothesisClass::AllFunctions,
        horizon,
    )
}

/// Instances are round indices, labels {0, 1}, every nonempty set valid,
/// H = the two constants; existence-realizable.
pub fn agnostic_two_constant(horizon: usize) -> Result<GameSpec> {
    Ok(GameSpec::new(
        horizon,
        2,
        SetSystem::all_nonempty(2),
        constants_over(horizon, &[0, 1]),
        horizon,
    )?
    .with_realizability(Realizability::ExistenceRealizable))
}

/// Prefix-parity game truncated to `horizon` instances (instance i stands
/// for x = i + 1). Integer labels 1..=int_cap are stored as 0..int_cap,
/// followed by +1/2 and -1/2. Hypotheses: the constants f_c for
/// c in 1..=int_cap, then the parity functions g_c for c in 1..=2^horizon,
/// which realize every sign pattern.
#[derive(Debug, Clone)]
pub struct ParityGame {
    pub spec: GameSpec,
    pub horizon: usize,
    pub int_cap: usize,
}

impl ParityGame {
    pub fn new(horizon: usize, int_cap: usize) -> Result<Self> {
        let n_labels = int_cap + 2;
        let plus = int_cap as Label;
        let minus = plus + 1;
        let mut sets = Vec::new();
        for c in 0..int_cap as Label {
            sets.push(LabelSet::from_labels([c, plus]));
            sets.push(LabelSet::from_labels([c, minus]));
        }
        let mut tables: Vec<Vec<Label>> = (0..int_cap as Label).map(|c| vec![c; horizon]).collect();
        for c in 1..=(1u64 << horizon) {
            tables.push(
                (1..=horizon)
                    .map(|x| if parity(c, x) { plus } else { minus })
                    .collect(),
            );
        }
        let spec = GameSpec::new(
            horizon,
            n_labels,
            SetSystem::listed(n_labels, sets)?,
            HypothesisClass::Tables(tables),
            horizon,
        )?;
        Ok(ParityGame {
            spec,
            horizon,
            int_cap,
        })
    }

    pub fn plus(&self) -> Label {
        self.int_cap as Label
    }

    pub fn minus(&self) -> Label {
        self.int_cap as Label + 1
    }

    pub fn is_half(&self, y: Label) -> bool {
        y >= self.int_cap as Label
    }

    /// Stored label of the integer c.
    pub fn int_label(&self, c: u64) -> Label {
        (c - 1) as Label
    }

    /// Values of g_c on the truncated instances.
    pub fn g_table(&self, c: u64) -> Vec<Label> {
        (1..=self.horizon)
            .map(|x| {
                if parity(c, x) {
                    self.plus()
                } else {
                    self.minus()
                }
            })
            .collect()
    }
}

/// Whether the first `x` least-significant bits of c have even parity, i.e.
/// g_c(x) = +1/2 for positive c.
pub fn parity(c: u64, x: usize) -> bool {
    let low = if x >= 64 { c } else { c & ((1u64 << x) - 1) };
    low.count_ones() % 2 == 0
}

/// Finite stand-in for the shifted-sine class: f_c(x) = tri((x + c) mod n)
/// with tri(k) = min(k, n - k) on Z_n, n odd. Two distinct shifts agree on
/// exactly one instance. Label 0 is the analogue of the extreme values and
/// stays out of the reveal window.
#[derive(Debug, Clone)]
pub struct CollisionFamily {
    pub modulus: usize,
    pub spec: GameSpec,
}

impl CollisionFamily {
    pub fn new(modulus: usize, horizon: usize) -> Result<Self> {
        if modulus.is_multiple_of(2) || modulus < 3 {
            return Err(crate::Error::InvalidSpec(
                "collision modulus must be odd and at least 3".into(),
            ));
        }
        let n_labels = modulus / 2 + 1;
        let tables = (0..modulus)
            .map(|c| {
                (0..modulus)
                    .map(|x| tri((x + c) % modulus, modulus))
                    .collect()
            })
            .collect();
        let spec = GameSpec::new(
            modulus,
            n_labels,
            SetSystem::all_nonempty(n_labels),
            HypothesisClass::Tables(tables),
            horizon,
        )?;
        Ok(CollisionFamily { modulus, spec })
    }

    /// Labels the adversary may reveal.
    pub fn window(&self) -> LabelSet {
        LabelSet::full(self.spec.n_labels).without(0)
    }

    pub fn tables(&self) -> &[Vec<Label>] {
        self.spec.hypotheses.tables().unwrap()
    }
}

fn tri(k: usize, n: usize) -> Label {
    k.min(n - k) as Label
}
