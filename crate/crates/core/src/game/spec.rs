use crate::bits::{Label, LabelSet, MAX_HYPOTHESES, MAX_LABELS};
use crate::error::{invalid, Error, Result};
use serde::{Deserialize, Serialize};

/// Largest universe for which an all-nonempty system is listed explicitly.
const MATERIALIZE_LIMIT: usize = 20;
pub const MAX_HORIZON: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Feedback {
    #[default]
    Partial,
    SetValued,
    Multiclass,
    Bandit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Visibility {
    #[default]
    Oblivious,
    Public,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Realizability {
    #[default]
    SetRealizable,
    ExistenceRealizable,
    Agnostic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Protocol {
    #[serde(default)]
    pub feedback: Feedback,
    #[serde(default)]
    pub visibility: Visibility,
    #[serde(default)]
    pub realizability: Realizability,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SetFamily {
    Listed(Vec<LabelSet>),
    /// Every nonempty subset of the universe, kept symbolic.
    AllNonempty,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetSystem {
    universe: usize,
    family: SetFamily,
}

impl SetSystem {
    pub fn listed(universe: usize, sets: Vec<LabelSet>) -> Result<Self> {
        if universe == 0 || universe > MAX_LABELS {
            return Err(invalid(format!("universe size {universe} out of range")));
        }
        if sets.is_empty() {
            return Err(invalid("set system is empty"));
        }
        let full = LabelSet::full(universe);
        for (i, s) in sets.iter().enumerate() {
            if s.is_empty() {
                return Err(invalid(format!("set {i} is empty")));
            }
            if !s.is_subset(full) {
                return Err(invalid(format!("set {i} has labels outside the alphabet")));
            }
            if sets[..i].contains(s) {
                return Err(invalid(format!("set {i} is a duplicate")));
            }
        }
        Ok(SetSystem {
            universe,
            family: SetFamily::Listed(sets),
        })
    }

    pub fn from_lists(universe: usize, lists: &[Vec<Label>]) -> Result<Self> {
        let sets = lists
            .iter()
            .map(|l| LabelSet::from_labels(l.iter().copied()))
            .collect();
        Self::listed(universe, sets)
    }

    pub fn all_nonempty(universe: usize) -> Self {
        SetSystem {
            universe,
            family: SetFamily::AllNonempty,
        }
    }

    pub fn singletons(universe: usize) -> Self {
        let sets = (0..universe as Label).map(LabelSet::singleton).collect();
        SetSystem {
            universe,
            family: SetFamily::Listed(sets),
        }
    }

    pub fn co_singletons(universe: usize) -> Self {
        let full = LabelSet::full(universe);
        let sets = (0..universe as Label).map(|y| full.without(y)).collect();
        SetSystem {
            universe,
            family: SetFamily::Listed(sets),
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn family(&self) -> &SetFamily {
        &self.family
    }

    pub fn is_all_nonempty(&self) -> bool {
        match &self.family {
            SetFamily::AllNonempty => true,
            SetFamily::Listed(s) => s.len() as u128 == (1u128 << self.universe) - 1,
        }
    }

    pub fn len(&self) -> u128 {
        match &self.family {
            SetFamily::Listed(s) => s.len() as u128,
            SetFamily::AllNonempty => (1u128 << self.universe) - 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, set: LabelSet) -> bool {
        match &self.family {
            SetFamily::Listed(s) => s.contains(&set),
            SetFamily::AllNonempty => {
                !set.is_empty() && set.is_subset(LabelSet::full(self.universe))
            }
        }
    }

    pub fn index_of(&self, set: LabelSet) -> Option<usize> {
        match &self.family {
            SetFamily::Listed(s) => s.iter().position(|&t| t == set),
            SetFamily::AllNonempty => self.contains(set).then(|| set.0 as usize - 1),
        }
    }

    /// Whether some member contains `set`.
    pub fn has_superset_of(&self, set: LabelSet) -> bool {
        match &self.family {
            SetFamily::Listed(s) => s.iter().any(|&t| set.is_subset(t)),
            SetFamily::AllNonempty => set.is_subset(LabelSet::full(self.universe)),
        }
    }

    /// Members listed explicitly, in declaration order (ascending mask for all-nonempty).
    pub fn sets(&self) -> Result<Vec<LabelSet>> {
        match &self.family {
            SetFamily::Listed(s) => Ok(s.clone()),
            SetFamily::AllNonempty if self.universe <= MATERIALIZE_LIMIT => {
                Ok((1..1u64 << self.universe).map(LabelSet).collect())
            }
            SetFamily::AllNonempty => Err(Error::BudgetExceeded {
                what: "set system materialization",
                limit: 1 << MATERIALIZE_LIMIT,
            }),
        }
    }

    pub fn is_union_closed(&self) -> bool {
        match &self.family {
            SetFamily::AllNonempty => true,
            SetFamily::Listed(s) => s.iter().all(|a| s.iter().all(|b| s.contains(&a.union(*b)))),
        }
    }

    pub fn contains_singletons(&self) -> bool {
        (0..self.universe as Label).all(|y| self.contains(LabelSet::singleton(y)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum HypothesisClass {
    Tables(Vec<Vec<Label>>),
    /// Every function from instances to labels, kept symbolic.
    AllFunctions,
}

impl HypothesisClass {
    pub fn tables(&self) -> Option<&[Vec<Label>]> {
        match self {
            HypothesisClass::Tables(t) => Some(t),
            HypothesisClass::AllFunctions => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameSpec {
    pub n_instances: usize,
    pub n_labels: usize,
    pub set_system: SetSystem,
    pub hypotheses: HypothesisClass,
    pub horizon: usize,
    pub protocol: Protocol,
    pub grid: u32,
}

impl GameSpec {
    pub fn new(
        n_instances: usize,
        n_labels: usize,
        set_system: SetSystem,
        hypotheses: HypothesisClass,
        horizon: usize,
    ) -> Result<Self> {
        let spec = GameSpec {
            n_instances,
            n_labels,
            set_system,
            hypotheses,
            horizon,
            protocol: Protocol::default(),
            grid: 12,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_protocol(mut self, protocol: Protocol) -> Self {
        self.protocol = protocol;
        self
    }

    pub fn with_realizability(mut self, r: Realizability) -> Self {
        self.protocol.realizability = r;
        self
    }

    pub fn with_visibility(mut self, v: Visibility) -> Self {
        self.protocol.visibility = v;
        self
    }

    pub fn with_feedback(mut self, f: Feedback) -> Self {
        self.protocol.feedback = f;
        self
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_grid(mut self, grid: u32) -> Self {
        self.grid = grid;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_instances == 0 {
            return Err(invalid("at least one instance is required"));
        }
        if self.n_labels < 2 || self.n_labels > MAX_LABELS {
            return Err(invalid(format!("label count must be in 2..={MAX_LABELS}")));
        }
        if self.horizon == 0 || self.horizon > MAX_HORIZON {
            return Err(invalid(format!("horizon must be in 1..={MAX_HORIZON}")));
        }
        if self.grid == 0 {
            return Err(invalid("grid must be positive"));
        }
        if self.set_system.universe() != self.n_labels {
            return Err(invalid("set system universe differs from the label count"));
        }
        if let SetFamily::Listed(sets) = self.set_system.family() {
            SetSystem::listed(self.n_labels, sets.clone())?;
        }
        if let HypothesisClass::Tables(tables) = &self.hypotheses {
            if tables.is_empty() {
                return Err(invalid("hypothesis class is empty"));
            }
            if tables.len() > MAX_HYPOTHESES {
                return Err(invalid(format!(
                    "at most {MAX_HYPOTHESES} hypotheses are supported"
                )));
            }
            for (i, t) in tables.iter().enumerate() {
                if t.len() != self.n_instances {
                    return Err(invalid(format!("hypothesis {i} has {} entries", t.len())));
                }
                if t.iter().any(|&y| y as usize >= self.n_labels) {
                    return Err(invalid(format!("hypothesis {i} outputs an unknown label")));
                }
                if tables[..i].contains(t) {
                    return Err(invalid(format!("hypothesis {i} duplicates an earlier one")));
                }
            }
        }
        Ok(())
    }

    pub fn n_hypotheses(&self) -> Option<usize> {
        self.hypotheses.tables().map(|t| t.len())
    }

    /// Label of hypothesis `h` at instance `x` for an explicit class.
    pub fn eval(&self, h: usize, x: usize) -> Label {
        match &self.hypotheses {
            HypothesisClass::Tables(t) => t[h][x],
            HypothesisClass::AllFunctions => panic!("eval on a symbolic class"),
        }
    }
}
