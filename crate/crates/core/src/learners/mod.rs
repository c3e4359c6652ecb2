//! Learner strategies.

mod agnostic;
mod cvsp;
mod dpfla;
mod randomized;
mod simple;
mod version_space;

pub use agnostic::{
    agnostic_minimax_learner, agnostic_minimax_regret, AgnosticMinimax, AgnosticValue,
};
pub use cvsp::{check_mistake_groups, cvsp_learner, mistake_bound, mistake_groups, Cvsp};
pub use dpfla::{dpfla_learner, Dpfla};
pub use randomized::{fixed_scale_measure, frpfl_learner, mrpfl_learner, ScaleLearner};
pub use simple::{
    constant_learner, first_set_learner, helly_intersection_learner, uniform_cube_learner,
    uniform_learner, FirstSet, Fixed, HellyIntersection,
};
pub use version_space::{agreeing_set, label_votes, VersionSpace};

use crate::bits::LabelSet;
use crate::error::{Error, Result};
use crate::game::{GameSpec, Learner, StrategyConfig, Threshold};
use crate::measure_dims::default_scale_count;

pub const LEARNER_NAMES: &[&str] = &[
    "cvsp",
    "dpfla",
    "frpfl",
    "mrpfl",
    "helly_intersection",
    "uniform_cube",
    "uniform",
    "constant",
    "first_set",
    "agnostic_minimax",
];

fn label_param(cfg: &StrategyConfig, key: &str, n_labels: usize) -> Result<Option<u8>> {
    match cfg.int(key)? {
        Some(v) if v < 0 || v as usize >= n_labels => {
            Err(Error::Parse(format!("{}.{key} out of range", cfg.name)))
        }
        v => Ok(v.map(|v| v as u8)),
    }
}

/// Builds a learner from its configured name and parameters.
pub fn learner_from_config(spec: &GameSpec, cfg: &StrategyConfig) -> Result<Box<dyn Learner>> {
    let grid = match cfg.int("grid")? {
        Some(g) if g <= 0 || g > u32::MAX as i64 => {
            return Err(Error::Parse("grid must be positive".into()))
        }
        Some(g) => g as u32,
        None => spec.grid,
    };
    Ok(match cfg.name.as_str() {
        "cvsp" => Box::new(cvsp_learner(spec)?),
        "dpfla" => Box::new(dpfla_learner(spec)?),
        "frpfl" => {
            let gamma = cfg.threshold("gamma")?.unwrap_or(Threshold::new(1, 2)?);
            Box::new(frpfl_learner(spec, gamma, grid)?)
        }
        "mrpfl" => {
            let n = match cfg.int("scales")? {
                Some(n) if n <= 0 => return Err(Error::Parse("scales must be positive".into())),
                Some(n) => n as usize,
                None => default_scale_count(spec.horizon),
            };
            Box::new(mrpfl_learner(spec, n, grid)?)
        }
        "helly_intersection" => {
            let list = cfg
                .int_list("transversal")?
                .ok_or_else(|| Error::Parse("helly_intersection needs a transversal".into()))?;
            let mut t = LabelSet::EMPTY;
            for y in list {
                if y < 0 || y as usize >= spec.n_labels {
                    return Err(Error::Parse("transversal label out of range".into()));
                }
                t = t.with(y as u8);
            }
            Box::new(helly_intersection_learner(spec, t)?)
        }
        "uniform_cube" => {
            let t = cfg
                .int("support")?
                .map_or(spec.horizon, |v| v.max(0) as usize);
            Box::new(uniform_cube_learner(t, spec.n_labels)?)
        }
        "uniform" => Box::new(uniform_learner(spec.n_labels)),
        "constant" => Box::new(constant_learner(
            label_param(cfg, "label", spec.n_labels)?.unwrap_or(0),
        )),
        "first_set" => Box::new(first_set_learner()),
        "agnostic_minimax" => Box::new(agnostic_minimax_learner(spec)?),
        other => return Err(Error::Parse(format!("unknown learner {other:?}"))),
    })
}
