//! Adversary strategies.

mod collision;
mod constructions;
mod optimal;
mod search;
mod simple;
mod tree;

pub use collision::{collision_adversary, Collision, CollisionLog};
pub use constructions::{
    agnostic_two_constant_adversary, pf_not_sv_adversary, public_cube_adversary,
    AgnosticTwoConstant, ParityTruth, PrefixParity, PublicCube,
};
pub use optimal::{optimal_adversary, optimal_scale_adversary, Optimal};
pub use search::worst_case_expected_loss;
pub use simple::{
    counts_against, fixed_collection_adversary, random_adversary, FixedCollection, RandomAdversary,
};
pub use tree::{shattering_tree_adversary, TreeAdversary};

use crate::bits::LabelSet;
use crate::dims::{label_solver, naive_tree_oracle, witness_tree};
use crate::error::{Error, Result};
use crate::game::{Adversary, GameSpec, StrategyConfig};
use crate::games::{CollisionFamily, ParityGame};
use crate::Rational;

pub const ADVERSARY_NAMES: &[&str] = &[
    "optimal",
    "shattering_tree",
    "collision",
    "agnostic_two_constant",
    "public_cube",
    "pf_not_sv",
    "random",
    "fixed_collection",
];

fn nonneg(cfg: &StrategyConfig, key: &str) -> Result<Option<u64>> {
    match cfg.int(key)? {
        Some(v) if v < 0 => Err(Error::Parse(format!(
            "{}.{key} must be nonnegative",
            cfg.name
        ))),
        v => Ok(v.map(|v| v as u64)),
    }
}

/// Builds an adversary from its configured name and parameters.
pub fn adversary_from_config(spec: &GameSpec, cfg: &StrategyConfig) -> Result<Box<dyn Adversary>> {
    Ok(match cfg.name.as_str() {
        "optimal" => match cfg.threshold("gamma")? {
            None => Box::new(optimal_adversary(spec)?),
            Some(gamma) => {
                let g = nonneg(cfg, "grid")?.map_or(spec.grid, |g| g as u32);
                Box::new(optimal_scale_adversary(spec, gamma, g)?)
            }
        },
        "shattering_tree" => {
            // Brute-force tree at the requested count, else the solver's tree.
            let tree = match nonneg(cfg, "q")? {
                Some(q) => naive_tree_oracle(spec, spec.horizon, q as u32)?.ok_or_else(|| {
                    Error::InvalidSpec(format!("no depth-{} tree forces {q} events", spec.horizon))
                })?,
                None => witness_tree(&mut label_solver(spec)?, spec.horizon)?,
            };
            Box::new(shattering_tree_adversary(spec, tree)?)
        }
        "collision" => match nonneg(cfg, "modulus")? {
            Some(m) => {
                let family = CollisionFamily::new(m as usize, spec.horizon)?;
                if family.spec != *spec {
                    return Err(Error::InvalidSpec(
                        "collision family does not match the spec".into(),
                    ));
                }
                Box::new(collision_adversary(spec, family.window())?)
            }
            None => Box::new(collision_adversary(spec, LabelSet::full(spec.n_labels))?),
        },
        "agnostic_two_constant" => Box::new(agnostic_two_constant_adversary(spec.horizon)),
        "public_cube" => {
            let k = cfg
                .threshold("k")?
                .map_or_else(|| Rational::new(1.into(), 2.into()), |t| t.to_rational());
            Box::new(public_cube_adversary(spec.n_labels, k)?)
        }
        "pf_not_sv" => {
            let cap =
                nonneg(cfg, "int_cap")?.map_or(spec.n_labels.saturating_sub(2), |c| c as usize);
            let game = ParityGame::new(spec.horizon, cap)?;
            if game.spec.n_labels != spec.n_labels || game.spec.hypotheses != spec.hypotheses {
                return Err(Error::InvalidSpec(
                    "spec is not the prefix-parity game".into(),
                ));
            }
            Box::new(pf_not_sv_adversary(&game))
        }
        "random" => Box::new(random_adversary(spec, nonneg(cfg, "seed")?.unwrap_or(0))?),
        "fixed_collection" => {
            let hyps = cfg
                .int_list("hypotheses")?
                .ok_or_else(|| Error::Parse("fixed_collection needs hypotheses".into()))?;
            let mut mask = 0u128;
            for h in hyps {
                if !(0..128).contains(&h) {
                    return Err(Error::Parse("hypothesis index out of range".into()));
                }
                mask |= 1 << h;
            }
            let instances = match cfg.int_list("instances")? {
                Some(xs) => xs.into_iter().map(|x| x.max(0) as usize).collect(),
                None => (0..spec.horizon).map(|t| t % spec.n_instances).collect(),
            };
            Box::new(fixed_collection_adversary(spec, mask, instances)?)
        }
        other => return Err(Error::Parse(format!("unknown adversary {other:?}"))),
    })
}
