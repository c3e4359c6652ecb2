use crate::bits::LabelSet;
use crate::dims::{CollectionState, EdgeSet, ValueSolver};
use crate::error::{Error, Result};
use crate::game::{
    CollectionSpace, GameSpec, Learner, Measure, Observation, Prediction, Realizability, Threshold,
    Visibility,
};
use crate::measure_dims::{dyadic_scales, grid_solver, msp};
use crate::Rational;
use rustc_hash::FxHashMap;
use std::cell::RefCell;
use std::rc::Rc;
use std::sync::Arc;

fn check_mode(spec: &GameSpec) -> Result<()> {
    if spec.protocol.realizability != Realizability::SetRealizable
        || spec.protocol.visibility != Visibility::Oblivious
    {
        return Err(Error::Unsupported(
            "randomized learners need set-realizable oblivious play".into(),
        ));
    }
    Ok(())
}

/// First grid measure minimizing the worst case over reveals of the
/// remaining value, `r` rounds left including this one.
pub fn fixed_scale_measure(
    solver: &mut ValueSolver,
    state: &CollectionState,
    x: usize,
    r: usize,
) -> Result<Measure> {
    let EdgeSet::Grid { measures, gamma } = solver.edges().clone() else {
        return Err(Error::Unsupported(
            "fixed-scale choice needs a measure grid".into(),
        ));
    };
    let mut images: Vec<LabelSet> = state.ids().map(|id| solver.space().image(id, x)).collect();
    images.sort_unstable();
    images.dedup();
    // The value depends on a measure only through which alive images it counts.
    let mut seen: FxHashMap<u128, u32> = FxHashMap::default();
    let mut best: Option<(u32, &Measure)> = None;
    for m in &measures {
        let sig = images
            .iter()
            .enumerate()
            .filter(|(_, &img)| m.counts_event(img, &gamma))
            .fold(0u128, |s, (k, _)| s | 1 << k);
        let v = match seen.get(&sig) {
            Some(&v) => v,
            None => {
                let v = solver.prediction_value(state, x, &Prediction::Measure(m.clone()), r)?;
                seen.insert(sig, v);
                v
            }
        };
        if best.is_none_or(|(b, _)| v < b) {
            best = Some((v, m));
        }
    }
    Ok(best.expect("grid is nonempty").1.clone())
}

#[derive(Clone)]
struct Scale {
    solver: Rc<RefCell<ValueSolver>>,
    state: CollectionState,
}

impl Scale {
    fn new(space: Arc<CollectionSpace>, gamma: Threshold, g: u32) -> Result<Self> {
        let solver = grid_solver(space, gamma, g)?;
        let state = solver.root();
        Ok(Scale {
            solver: Rc::new(RefCell::new(solver)),
            state,
        })
    }

    fn choose(&self, x: usize, r: usize) -> Result<Measure> {
        fixed_scale_measure(&mut self.solver.borrow_mut(), &self.state, x, r)
    }

    fn update(&mut self, x: usize, p: &Prediction, y: u8) -> Result<()> {
        let solver = self.solver.borrow();
        let rule = solver.rule();
        self.state = self
            .state
            .child(solver.space(), x, |img| rule.is_event(p, img), y);
        if self.state.is_empty() {
            return Err(Error::EmptyConsistentSet);
        }
        Ok(())
    }
}

/// Plays grid measures chosen by one or more fixed-scale value functions;
/// with several scales the measure selection scan picks among them.
#[derive(Clone)]
pub struct ScaleLearner {
    scales: Vec<Scale>,
    thresholds: Vec<Rational>,
    sets: Arc<Vec<LabelSet>>,
    horizon: usize,
    played: usize,
    last: Option<Prediction>,
    multi: bool,
}

pub fn frpfl_learner(spec: &GameSpec, gamma: Threshold, g: u32) -> Result<ScaleLearner> {
    check_mode(spec)?;
    let space = Arc::new(CollectionSpace::build(spec)?);
    Ok(ScaleLearner {
        scales: vec![Scale::new(space, gamma, g)?],
        thresholds: vec![gamma.to_rational()],
        sets: Arc::new(Vec::new()),
        horizon: spec.horizon,
        played: 0,
        last: None,
        multi: false,
    })
}

/// `n` scales with thresholds 1/2, 1/4, ..., 2^-n.
pub fn mrpfl_learner(spec: &GameSpec, n: usize, g: u32) -> Result<ScaleLearner> {
    check_mode(spec)?;
    if n == 0 {
        return Err(Error::InvalidSpec("at least one scale is needed".into()));
    }
    let space = Arc::new(CollectionSpace::build(spec)?);
    let thresholds = dyadic_scales(n);
    let scales = thresholds
        .iter()
        .map(|t| Scale::new(space.clone(), Threshold::from_rational(t)?, g))
        .collect::<Result<_>>()?;
    Ok(ScaleLearner {
        scales,
        thresholds,
        sets: Arc::new(spec.set_system.sets()?),
        horizon: spec.horizon,
        played: 0,
        last: None,
        multi: true,
    })
}

impl ScaleLearner {
    /// Prefix-seeded value of each scale over the remaining rounds.
    pub fn potentials(&self) -> Result<Vec<u32>> {
        let r = self.horizon - self.played;
        self.scales
            .iter()
            .map(|s| s.solver.borrow_mut().value(&s.state, r))
            .collect()
    }

    pub fn thresholds(&self) -> &[Rational] {
        &self.thresholds
    }
}

impl Learner for ScaleLearner {
    fn name(&self) -> String {
        if self.multi { "mrpfl" } else { "frpfl" }.into()
    }

    fn predict(&mut self, x: usize) -> Result<Prediction> {
        if self.played >= self.horizon {
            return Err(Error::ProtocolViolation(
                "learner asked past its horizon".into(),
            ));
        }
        let r = self.horizon - self.played;
        let m = if self.scales.len() == 1 {
            self.scales[0].choose(x, r)?
        } else {
            let candidates = self
                .scales
                .iter()
                .map(|s| s.choose(x, r))
                .collect::<Result<Vec<_>>>()?;
            let pick = msp(&candidates, &self.thresholds, &self.sets);
            candidates[pick - 1].clone()
        };
        let p = Prediction::Measure(m);
        self.last = Some(p.clone());
        Ok(p)
    }

    fn observe(&mut self, x: usize, obs: &Observation) -> Result<()> {
        let y = obs
            .revealed
            .ok_or_else(|| Error::ProtocolViolation("learner needs a revealed label".into()))?;
        let p = self
            .last
            .take()
            .ok_or_else(|| Error::ProtocolViolation("observe before predict".into()))?;
        for s in &mut self.scales {
            s.update(x, &p, y)?;
        }
        self.played += 1;
        Ok(())
    }

    fn clone_box(&self) -> Box<dyn Learner> {
        Box::new(self.clone())
    }
}
