//! TOML game-spec files.

use super::spec::{GameSpec, HypothesisClass, Protocol, SetFamily, SetSystem};
use crate::bits::Label;
use crate::error::{invalid, Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemField {
    Lists(Vec<Vec<Label>>),
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HypothesesField {
    Tables(Vec<Vec<Label>>),
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyConfig {
    pub name: String,
    #[serde(default)]
    pub params: toml::Table,
}

impl StrategyConfig {
    pub fn int(&self, key: &str) -> Result<Option<i64>> {
        match self.params.get(key) {
            None => Ok(None),
            Some(toml::Value::Integer(i)) => Ok(Some(*i)),
            Some(_) => Err(Error::Parse(format!(
                "{}.{key} must be an integer",
                self.name
            ))),
        }
    }

    pub fn string(&self, key: &str) -> Result<Option<String>> {
        match self.params.get(key) {
            None => Ok(None),
            Some(toml::Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(Error::Parse(format!(
                "{}.{key} must be a string",
                self.name
            ))),
        }
    }

    /// A scale given as a string `a/b` or an integer.
    pub fn threshold(&self, key: &str) -> Result<Option<crate::game::Threshold>> {
        match self.params.get(key) {
            None => Ok(None),
            Some(toml::Value::String(s)) => s.parse().map(Some),
            Some(toml::Value::Integer(i)) => i.to_string().parse().map(Some),
            Some(_) => Err(Error::Parse(format!(
                "{}.{key} must be a rational string",
                self.name
            ))),
        }
    }

    pub fn int_list(&self, key: &str) -> Result<Option<Vec<i64>>> {
        match self.params.get(key) {
            None => Ok(None),
            Some(toml::Value::Array(a)) => a
                .iter()
                .map(|v| {
                    v.as_integer().ok_or_else(|| {
                        Error::Parse(format!("{}.{key} must hold integers", self.name))
                    })
                })
                .collect::<Result<Vec<_>>>()
                .map(Some),
            Some(_) => Err(Error::Parse(format!("{}.{key} must be a list", self.name))),
        }
    }
}

fn default_grid() -> u32 {
    12
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub labels: usize,
    pub instances: usize,
    pub set_system: SystemField,
    pub hypotheses: HypothesesField,
    pub horizon: usize,
    #[serde(default)]
    pub protocol: Protocol,
    #[serde(default = "default_grid")]
    pub grid: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learner: Option<StrategyConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adversary: Option<StrategyConfig>,
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec files always serialize")
    }

    pub fn from_spec(spec: &GameSpec) -> Self {
        let set_system = match spec.set_system.family() {
            SetFamily::AllNonempty => SystemField::Named("all_nonempty".into()),
            SetFamily::Listed(sets) => {
                SystemField::Lists(sets.iter().map(|s| s.iter().collect()).collect())
            }
        };
        let hypotheses = match &spec.hypotheses {
            HypothesisClass::Tables(t) => HypothesesField::Tables(t.clone()),
            HypothesisClass::AllFunctions => HypothesesField::Named("all_functions".into()),
        };
        SpecFile {
            name: None,
            labels: spec.n_labels,
            instances: spec.n_instances,
            set_system,
            hypotheses,
            horizon: spec.horizon,
            protocol: spec.protocol,
            grid: spec.grid,
            learner: None,
            adversary: None,
        }
    }

    pub fn to_spec(&self) -> Result<GameSpec> {
        let set_system = match &self.set_system {
            SystemField::Lists(lists) => {
                for (i, l) in lists.iter().enumerate() {
                    if l.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(invalid(format!(
                            "set {i} is not a sorted list of distinct labels"
                        )));
                    }
                    if l.iter().any(|&y| y as usize >= self.labels) {
                        return Err(invalid(format!("set {i} has labels outside the alphabet")));
                    }
                }
                if self.labels == 0 || self.labels > crate::bits::MAX_LABELS {
                    return Err(invalid("label count out of range"));
                }
                SetSystem::from_lists(self.labels, lists)?
            }
            SystemField::Named(n) => named_system(n, self.labels)?,
        };
        let hypotheses = match &self.hypotheses {
            HypothesesField::Tables(t) => HypothesisClass::Tables(t.clone()),
            HypothesesField::Named(n) if n == "all_functions" => HypothesisClass::AllFunctions,
            HypothesesField::Named(n) => {
                return Err(invalid(format!("unknown hypothesis class {n:?}")))
            }
        };
        let spec = GameSpec {
            n_instances: self.instances,
            n_labels: self.labels,
            set_system,
            hypotheses,
            horizon: self.horizon,
            protocol: self.protocol,
            grid: self.grid,
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn named_system(name: &str, labels: usize) -> Result<SetSystem> {
    if !(2..=crate::bits::MAX_LABELS).contains(&labels) {
        return Err(invalid("label count out of range"));
    }
    match name {
        "all_nonempty" => Ok(SetSystem::all_nonempty(labels)),
        "singletons" => Ok(SetSystem::singletons(labels)),
        "co_singletons" => Ok(SetSystem::co_singletons(labels)),
        _ => Err(invalid(format!("unknown set system {name:?}"))),
    }
}

pub fn parse_spec(text: &str) -> Result<GameSpec> {
    SpecFile::parse(text)?.to_spec()
}
