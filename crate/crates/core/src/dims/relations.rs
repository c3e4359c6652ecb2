use super::littlestone::{ml_sl_bl_dim, Variant};
use super::pfl_dim;
use crate::error::Result;
use crate::game::GameSpec;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationsReport {
    pub depth: usize,
    /// Multiclass dimension, capped at the depth.
    pub ml: u32,
    /// Set Littlestone dimension, capped at depth + 1.
    pub sl: u32,
    pub pfl: u32,
    /// `ml <= pfl`; None when singletons are not all in the set system.
    pub ml_le_pfl: Option<bool>,
    /// `pfl <= d - floor(d / (sl + 1))`; None when the system is not union-closed.
    pub key_bound: Option<u32>,
    pub key_ineq: Option<bool>,
}

impl RelationsReport {
    pub fn passed(&self) -> bool {
        self.ml_le_pfl != Some(false) && self.key_ineq != Some(false)
    }
}

pub fn dimension_relations_report(spec: &GameSpec, d: usize) -> Result<RelationsReport> {
    let pfl = pfl_dim(spec, d)?;
    let ml = ml_sl_bl_dim(spec, Variant::Ml, d as u32)?;
    let sl = ml_sl_bl_dim(spec, Variant::Sl, d as u32 + 1)?;
    let ml_le_pfl = spec.set_system.contains_singletons().then_some(ml <= pfl);
    let key_bound = spec
        .set_system
        .is_union_closed()
        .then(|| d as u32 - d as u32 / (sl + 1));
    Ok(RelationsReport {
        depth: d,
        ml,
        sl,
        pfl,
        ml_le_pfl,
        key_bound,
        key_ineq: key_bound.map(|b| pfl <= b),
    })
}
