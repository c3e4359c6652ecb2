//! Built-in replication suite: each check recomputes a claimed value or
//! bound exactly and reports pass or fail.

use super::family::{enumerate_family, small_family, FamilyBounds};
use crate::adversaries::{
    agnostic_two_constant_adversary, fixed_collection_adversary, optimal_adversary,
    optimal_scale_adversary, pf_not_sv_adversary, public_cube_adversary, random_adversary,
    worst_case_expected_loss,
};
use crate::bits::{Label, LabelSet};
use crate::dims::{
    dimension_relations_report, minimax_det_regret, naive_best, pfl_dim, ppfl_dim, within_budget,
    DEFAULT_TREE_BUDGET,
};
use crate::error::Result;
use crate::game::{
    play_game, Adversary, Feedback, GameSpec, Learner, Measure, Threshold, Transcript, Visibility,
};
use crate::games::{
    agnostic_two_constant, binary_singleton, cube, helly_six, two_constant_full,
    two_constant_singletons, ParityGame, HELLY_TRANSVERSAL,
};
use crate::learners::{
    agnostic_minimax_learner, agnostic_minimax_regret, check_mistake_groups, cvsp_learner,
    dpfla_learner, first_set_learner, frpfl_learner, helly_intersection_learner, mistake_bound,
    mistake_groups, uniform_cube_learner, uniform_learner,
};
use crate::measure_dims::{minimax_rand_regret, msp, pms_dim};
use crate::setsys::{helly_number, inseparability_report};
use crate::{rational, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: usize,
    pub name: &'static str,
    pub claim: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub runtime_ms: u128,
}

pub struct Check {
    pub id: usize,
    pub name: &'static str,
    pub claim: &'static str,
    pub run: fn() -> Result<Verdict>,
}

/// Outcome of one check: failures are described, successes summarized.
pub struct Verdict {
    pub failures: Vec<String>,
    pub summary: String,
}

impl Verdict {
    fn new(failures: Vec<String>, summary: impl Into<String>) -> Result<Self> {
        Ok(Verdict {
            failures,
            summary: summary.into(),
        })
    }
}

pub const CHECKS: &[Check] = &[
    Check {
        id: 1,
        name: "minimax_equals_pfl",
        claim: "deterministic minimax regret equals the PFL dimension; the tree oracle agrees within budget",
        run: minimax_equals_pfl,
    },
    Check {
        id: 2,
        name: "cvsp_counting_bound",
        claim: "CVSP vs the optimal adversary makes at most sum_{i<=n/2} C(n,i) mistakes for n <= 4 hypotheses",
        run: cvsp_counting_bound,
    },
    Check {
        id: 3,
        name: "binary_full_system_bound",
        claim: "two labels, every nonempty set valid, n <= 5 hypotheses: minimax regret <= n for T <= n + 2",
        run: binary_full_system_bound,
    },
    Check {
        id: 4,
        name: "multiclass_below_pfl",
        claim: "the multiclass dimension is at most PFL_d when singletons are valid sets",
        run: multiclass_below_pfl,
    },
    Check {
        id: 5,
        name: "union_closed_key_inequality",
        claim: "PFL_d <= d - floor(d / (SL + 1)) on union-closed systems, d <= 4",
        run: union_closed_key_inequality,
    },
    Check {
        id: 6,
        name: "helly_three_upper",
        claim: "six-label Helly-3 game: randomized minimax regret 1/3 for T <= 3 at grid 6; the intersection learner's worst case is 1/3",
        run: helly_three_upper,
    },
    Check {
        id: 7,
        name: "binary_singleton_lower",
        claim: "binary singleton game: randomized minimax regret equals PFL_T / 2 at even grids",
        run: binary_singleton_lower,
    },
    Check {
        id: 8,
        name: "delta_sufficient_pms",
        claim: "systems with small empty subfamilies: PMS equals PFL for gamma in {0, 1/(2p), 1/p}, g in {1, 4}",
        run: delta_sufficient_pms,
    },
    Check {
        id: 9,
        name: "frpfl_excess_rounds",
        claim: "FRPFL has at most PMS rounds with mass above gamma outside the valid set",
        run: frpfl_excess_rounds,
    },
    Check {
        id: 10,
        name: "oblivious_public_separation",
        claim: "uniform cube learner: loss <= 1 against oblivious adversaries, >= kT against the public adversary",
        run: oblivious_public_separation,
    },
    Check {
        id: 11,
        name: "agnostic_linear_regret",
        claim: "two constants, existence-realizable: regret >= T/2 for T <= 6 against every tested learner and the minimax learner",
        run: agnostic_linear_regret,
    },
    Check {
        id: 12,
        name: "partial_not_set_valued",
        claim: "prefix-parity game at T = 6: regret T under partial feedback, at most one mistake under set-valued feedback",
        run: partial_not_set_valued,
    },
    Check {
        id: 13,
        name: "property_suites",
        claim: "monotonicity, counting and potential invariants, and scale-selection agreement on random inputs",
        run: property_suites,
    },
];

pub fn run_check(check: &Check) -> CheckResult {
    let start = Instant::now();
    let (passed, detail) = match (check.run)() {
        Ok(v) if v.failures.is_empty() => (true, v.summary),
        Ok(v) => (
            false,
            format!("{} failures, first: {}", v.failures.len(), v.failures[0]),
        ),
        Err(e) => (false, format!("error: {e}")),
    };
    CheckResult {
        id: check.id,
        name: check.name,
        claim: check.claim,
        passed,
        detail,
        runtime_ms: start.elapsed().as_millis(),
    }
}

pub fn run_all() -> Vec<CheckResult> {
    CHECKS.iter().map(run_check).collect()
}

fn describe(spec: &GameSpec) -> String {
    format!(
        "X={} Y={} sets={:?} H={:?} T={}",
        spec.n_instances,
        spec.n_labels,
        spec.set_system.sets().unwrap_or_default(),
        spec.hypotheses.tables().unwrap_or(&[]),
        spec.horizon
    )
}

fn at(spec: &GameSpec, t: usize) -> GameSpec {
    spec.clone().with_horizon(t)
}

/// Runs `f` over specs in parallel and gathers failure messages in order.
fn failures_over<T: Sync>(
    items: &[T],
    f: impl Fn(&T) -> Result<Option<String>> + Sync + Send,
) -> Result<Vec<String>> {
    let out: Vec<Result<Option<String>>> = items.par_iter().map(f).collect();
    let mut fails = Vec::new();
    for r in out {
        if let Some(m) = r? {
            fails.push(m);
        }
    }
    Ok(fails)
}

fn horizons(specs: &[GameSpec], ts: std::ops::RangeInclusive<usize>) -> Vec<GameSpec> {
    specs
        .iter()
        .flat_map(|s| ts.clone().map(move |t| at(s, t)))
        .collect()
}

fn minimax_equals_pfl() -> Result<Verdict> {
    let specs = horizons(&small_family(), 1..=3);
    let confirmed = std::sync::atomic::AtomicUsize::new(0);
    let fails = failures_over(&specs, |s| {
        let t = s.horizon;
        let (m, p) = (minimax_det_regret(s, t)?, pfl_dim(s, t)?);
        if m != p {
            return Ok(Some(format!("{}: minimax {m} vs pfl {p}", describe(s))));
        }
        if within_budget(s, t, DEFAULT_TREE_BUDGET) {
            let (q, _) = naive_best(s, t, DEFAULT_TREE_BUDGET)?;
            if q != p {
                return Ok(Some(format!("{}: tree oracle {q} vs pfl {p}", describe(s))));
            }
            confirmed.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        }
        Ok(None)
    })?;
    Verdict::new(
        fails,
        format!(
            "{} specs, {} confirmed by tree enumeration",
            specs.len(),
            confirmed.into_inner()
        ),
    )
}

fn cvsp_transcript(spec: &GameSpec, adversary: Box<dyn Adversary>) -> Result<Transcript> {
    Ok(play_game(spec, Box::new(cvsp_learner(spec)?), adversary)?
        .transcript()
        .clone())
}

fn cvsp_counting_bound() -> Result<Verdict> {
    let family = enumerate_family(FamilyBounds {
        max_instances: 2,
        max_labels: 3,
        max_hypotheses: 4,
        full_system_only: false,
    });
    let specs = horizons(&family, 1..=3);
    let fails = failures_over(&specs, |s| {
        let n = s.n_hypotheses().unwrap();
        let tr = cvsp_transcript(s, Box::new(optimal_adversary(s)?))?;
        let bound = mistake_bound(n);
        if tr.mistakes() as u64 > bound {
            return Ok(Some(format!(
                "{}: {} mistakes > {bound}",
                describe(s),
                tr.mistakes()
            )));
        }
        if !check_mistake_groups(s, &mistake_groups(s, &tr)?) {
            return Ok(Some(format!(
                "{}: mistake groups repeat or exceed n/2",
                describe(s)
            )));
        }
        Ok(None)
    })?;
    Verdict::new(fails, format!("{} games", specs.len()))
}

fn binary_full_system_bound() -> Result<Verdict> {
    let family = enumerate_family(FamilyBounds {
        max_instances: 3,
        max_labels: 2,
        max_hypotheses: 5,
        full_system_only: true,
    });
    let specs: Vec<GameSpec> = family
        .iter()
        .flat_map(|s| (1..=s.n_hypotheses().unwrap() + 2).map(move |t| at(s, t)))
        .collect();
    let fails = failures_over(&specs, |s| {
        let n = s.n_hypotheses().unwrap() as u32;
        let v = minimax_det_regret(s, s.horizon)?;
        Ok((v > n).then(|| format!("{}: regret {v} > {n}", describe(s))))
    })?;
    Verdict::new(fails, format!("{} games", specs.len()))
}

fn multiclass_below_pfl() -> Result<Verdict> {
    let specs: Vec<GameSpec> = small_family()
        .into_iter()
        .filter(|s| s.set_system.contains_singletons())
        .collect();
    let specs = horizons(&specs, 1..=3);
    let fails = failures_over(&specs, |s| {
        let r = dimension_relations_report(s, s.horizon)?;
        Ok((r.ml_le_pfl != Some(true))
            .then(|| format!("{}: ml {} > pfl {}", describe(s), r.ml, r.pfl)))
    })?;
    Verdict::new(fails, format!("{} games", specs.len()))
}

fn union_closed_key_inequality() -> Result<Verdict> {
    let specs: Vec<GameSpec> = small_family()
        .into_iter()
        .filter(|s| s.set_system.is_union_closed())
        .collect();
    let specs = horizons(&specs, 1..=4);
    let fails = failures_over(&specs, |s| {
        let r = dimension_relations_report(s, s.horizon)?;
        Ok((r.key_ineq != Some(true)).then(|| {
            format!(
                "{}: pfl {} > bound {:?} (sl {})",
                describe(s),
                r.pfl,
                r.key_bound,
                r.sl
            )
        }))
    })?;
    Verdict::new(fails, format!("{} games", specs.len()))
}

fn helly_three_upper() -> Result<Verdict> {
    let third = rational(1, 3);
    let mut fails = Vec::new();
    for t in 1..=3 {
        let spec = helly_six(t)?;
        let v = minimax_rand_regret(&spec, t, 6)?;
        if v != third {
            fails.push(format!("T={t}: randomized value {v}"));
        }
        let learner = helly_intersection_learner(&spec, LabelSet::from_labels(HELLY_TRANSVERSAL))?;
        let w = worst_case_expected_loss(&spec, Box::new(learner))?;
        if w != third {
            fails.push(format!("T={t}: intersection learner worst case {w}"));
        }
    }
    let h = helly_number(&helly_six(1)?.set_system)?;
    if h != 3 {
        fails.push(format!("helly number {h}"));
    }
    Verdict::new(fails, "value 1/3 at T = 1, 2, 3; helly number 3")
}

fn binary_singleton_lower() -> Result<Verdict> {
    let mut fails = Vec::new();
    for t in 1..=3 {
        let spec = binary_singleton(t)?;
        let half_pfl = Rational::new(pfl_dim(&spec, t)?.into(), 2.into());
        for g in [2, 4] {
            let v = minimax_rand_regret(&spec, t, g)?;
            if v != half_pfl {
                fails.push(format!("T={t} g={g}: {v} vs {half_pfl}"));
            }
        }
    }
    Verdict::new(fails, "T = 1..3, g in {2, 4}")
}

fn delta_sufficient_pms() -> Result<Verdict> {
    let mut specs = Vec::new();
    for s in small_family() {
        let p = helly_number(&s.set_system)?;
        if inseparability_report(&s.set_system, p, LabelSet::EMPTY)?.condition2_holds {
            specs.push((s, p));
        }
    }
    let cases: Vec<(GameSpec, usize)> = specs
        .iter()
        .flat_map(|(s, p)| (1..=3).map(move |t| (at(s, t), *p)))
        .collect();
    let fails = failures_over(&cases, |(s, p)| {
        let pfl = pfl_dim(s, s.horizon)?;
        let p = *p as u64;
        for gamma in [
            Threshold::zero(),
            Threshold::new(1, 2 * p)?,
            Threshold::new(1, p)?,
        ] {
            for g in [1, 4] {
                let v = pms_dim(s, s.horizon, gamma, g)?.value;
                if v != pfl {
                    return Ok(Some(format!(
                        "{}: gamma {gamma} g {g}: pms {v} vs pfl {pfl}",
                        describe(s)
                    )));
                }
            }
        }
        Ok(None)
    })?;
    Verdict::new(fails, format!("{} games", cases.len()))
}

fn excess_rounds(t: &Transcript, gamma: &Threshold) -> u32 {
    let g = gamma.to_rational();
    t.rounds
        .iter()
        .zip(&t.final_sets)
        .filter(|(r, s)| r.prediction.loss(**s) > g)
        .count() as u32
}

/// Small games used where a full family would be too slow.
pub fn sample_games() -> Result<Vec<GameSpec>> {
    let mut out = vec![
        two_constant_full(2)?,
        two_constant_singletons(3)?,
        helly_six(2)?,
    ];
    out.extend(
        small_family()
            .into_iter()
            .step_by(97)
            .map(|s| s.with_horizon(2)),
    );
    Ok(out)
}

fn frpfl_excess_rounds() -> Result<Verdict> {
    let g = 4;
    let gammas = [
        Threshold::zero(),
        Threshold::new(1, 4)?,
        Threshold::new(1, 2)?,
        Threshold::new(3, 4)?,
    ];
    let cases: Vec<(GameSpec, Threshold)> = sample_games()?
        .into_iter()
        .flat_map(|s| gammas.iter().map(move |&gm| (s.clone(), gm)))
        .collect();
    let fails = failures_over(&cases, |(s, gamma)| {
        let bound = pms_dim(s, s.horizon, *gamma, g)?.value;
        let mut adversaries: Vec<Box<dyn Adversary>> =
            vec![Box::new(optimal_scale_adversary(s, *gamma, g)?)];
        for seed in 0..4 {
            adversaries.push(Box::new(random_adversary(s, seed)?));
        }
        for a in adversaries {
            let name = a.name();
            let o = play_game(s, Box::new(frpfl_learner(s, *gamma, g)?), a)?;
            let e = excess_rounds(o.transcript(), gamma);
            if e > bound {
                return Ok(Some(format!(
                    "{} gamma {gamma} vs {name}: {e} rounds > {bound}",
                    describe(s)
                )));
            }
        }
        Ok(None)
    })?;
    Verdict::new(fails, format!("{} game/scale pairs", cases.len()))
}

fn oblivious_public_separation() -> Result<Verdict> {
    let mut fails = Vec::new();
    let spec = cube(3, 6)?;
    let w = worst_case_expected_loss(&spec, Box::new(uniform_cube_learner(3, 6)?))?;
    if w > rational(1, 1) {
        fails.push(format!("oblivious worst case {w} > 1"));
    }
    let (t, m, k) = (6, 8, rational(1, 2));
    let spec = cube(t, m)?.with_visibility(Visibility::Public);
    let o = play_game(
        &spec,
        Box::new(uniform_cube_learner(t, m)?),
        Box::new(public_cube_adversary(m, k.clone())?),
    )?;
    let need = k * Rational::from_integer((t as i64).into());
    if o.expected_loss < need {
        fails.push(format!("public expected loss {} < {need}", o.expected_loss));
    }
    Verdict::new(
        fails,
        format!(
            "oblivious worst case {w}, public expected loss {}",
            o.expected_loss
        ),
    )
}

fn agnostic_linear_regret() -> Result<Verdict> {
    let mut fails = Vec::new();
    for t in 1..=6 {
        let spec = agnostic_two_constant(t)?;
        let half = rational(t as i64, 2);
        let v = agnostic_minimax_regret(&spec)?;
        if Rational::from_integer(v.into()) < half {
            fails.push(format!("T={t}: minimax {v}"));
        }
        let learners: Vec<Box<dyn Learner>> = vec![
            Box::new(cvsp_learner(&spec)?),
            Box::new(dpfla_learner(&spec)?),
            Box::new(uniform_learner(2)),
            Box::new(agnostic_minimax_learner(&spec)?),
        ];
        for l in learners {
            let name = l.name();
            let o = play_game(&spec, l, Box::new(agnostic_two_constant_adversary(t)))?;
            if o.expected_regret < half {
                fails.push(format!("T={t}: {name} regret {}", o.expected_regret));
            }
        }
    }
    Verdict::new(fails, "T = 1..6")
}

/// Integer cap used for the truncated prefix-parity game.
pub const PARITY_INT_CAP: usize = 8;

fn partial_not_set_valued() -> Result<Verdict> {
    let t = 6;
    let game = ParityGame::new(t, PARITY_INT_CAP)?;
    let mut fails = Vec::new();
    let learners: Vec<Box<dyn Learner>> = vec![
        Box::new(cvsp_learner(&game.spec)?),
        Box::new(dpfla_learner(&game.spec)?),
    ];
    for l in learners {
        let name = l.name();
        let o = play_game(&game.spec, l, Box::new(pf_not_sv_adversary(&game)))?;
        if o.expected_regret != rational(t as i64, 1) || o.expected_comparator != rational(0, 1) {
            fails.push(format!(
                "{name}: regret {} comparator {}",
                o.expected_regret, o.expected_comparator
            ));
        }
    }
    let sv = game.spec.clone().with_feedback(Feedback::SetValued);
    let tables = sv.hypotheses.tables().unwrap().to_vec();
    for c in 1..=PARITY_INT_CAP as u64 {
        let f = game.int_label(c) as usize;
        let g = tables
            .iter()
            .position(|row| *row == game.g_table(c))
            .expect("parity table present");
        let adv = fixed_collection_adversary(&sv, 1 << f | 1 << g, (0..t).collect())?;
        let o = play_game(&sv, Box::new(first_set_learner()), Box::new(adv))?;
        if o.transcript().mistakes() > 1 {
            fails.push(format!(
                "set-valued c={c}: {} mistakes",
                o.transcript().mistakes()
            ));
        }
    }
    Verdict::new(fails, format!("T = {t}, integer cap {PARITY_INT_CAP}"))
}

/// Second implementation of the scale selection scan, checking both
/// conditions from scratch for every m.
pub fn msp_reference(measures: &[Measure], thresholds: &[Rational], sets: &[LabelSet]) -> usize {
    let n = measures.len();
    let gap = |i: usize, j: usize, s: &LabelSet| {
        let d = measures[i].complement_mass(*s) - measures[j].complement_mass(*s);
        if d < Rational::from_integer(0.into()) {
            -d
        } else {
            d
        }
    };
    let two = rational(2, 1);
    for m in 1..n {
        let stable = (2..=m).all(|i| {
            sets.iter()
                .all(|s| gap(i - 1, i - 2, s) <= &two * &thresholds[i - 2])
        });
        let jump = sets
            .iter()
            .all(|s| gap(m - 1, m, s) >= &two * &thresholds[m - 1]);
        if stable && jump {
            return m;
        }
    }
    n
}

/// Random scale-selection input on a grid of size 4.
pub fn random_msp_input(rng: &mut ChaCha8Rng) -> (Vec<Measure>, Vec<Rational>, Vec<LabelSet>) {
    let n_labels = rng.random_range(2..=4usize);
    let n = rng.random_range(1..=4usize);
    let measures = (0..n)
        .map(|_| {
            let mut w = vec![0u32; n_labels];
            for _ in 0..4 {
                w[rng.random_range(0..n_labels)] += 1;
            }
            Measure::new(w, 4).unwrap()
        })
        .collect();
    let thresholds = (0..n)
        .map(|_| rational(rng.random_range(0..=8), 16))
        .collect();
    let n_sets = rng.random_range(1..=4usize);
    let sets = (0..n_sets)
        .map(|_| LabelSet(rng.random_range(1..1u64 << n_labels)))
        .collect();
    (measures, thresholds, sets)
}

fn property_suites() -> Result<Verdict> {
    let mut fails = Vec::new();
    let family = small_family();
    // Dimension monotonicity in depth, and the empty prefix.
    let mono = failures_over(&family, |s| {
        let mut prev = 0;
        for d in 0..=4 {
            let v = pfl_dim(s, d)?;
            if v < prev || ppfl_dim(s, &[], &[], &[], d)? != v {
                return Ok(Some(format!("{}: depth {d}", describe(s))));
            }
            prev = v;
        }
        Ok(None)
    })?;
    fails.extend(mono);
    // PMS is non-increasing in gamma and in grid refinement.
    let sample: Vec<GameSpec> = family.iter().step_by(7).map(|s| at(s, 2)).collect();
    let pms = failures_over(&sample, |s| {
        let gammas = [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)];
        for g in [1, 2, 4] {
            let vals = gammas
                .iter()
                .map(|&(a, b)| Ok(pms_dim(s, 2, Threshold::new(a, b)?, g)?.value))
                .collect::<Result<Vec<_>>>()?;
            if vals.windows(2).any(|w| w[1] > w[0]) {
                return Ok(Some(format!("{}: g {g} values {vals:?}", describe(s))));
            }
        }
        let half = Threshold::new(1, 2)?;
        let by_grid = [1, 2, 4]
            .iter()
            .map(|&g| Ok(pms_dim(s, 2, half, g)?.value))
            .collect::<Result<Vec<_>>>()?;
        Ok(by_grid
            .windows(2)
            .any(|w| w[1] > w[0])
            .then(|| format!("{}: grid values {by_grid:?}", describe(s))))
    })?;
    fails.extend(pms);
    // CVSP counting and DPFLA potential along played games.
    let games: Vec<GameSpec> = family.iter().step_by(3).map(|s| at(s, 3)).collect();
    let invariants = failures_over(&games, |s| {
        let t = s.horizon;
        let top = pfl_dim(s, t)?;
        for seed in 0..3 {
            let tr = cvsp_transcript(s, Box::new(random_adversary(s, seed)?))?;
            if !check_mistake_groups(s, &mistake_groups(s, &tr)?) {
                return Ok(Some(format!(
                    "{}: counting invariant, seed {seed}",
                    describe(s)
                )));
            }
        }
        let mut opponents: Vec<Box<dyn Adversary>> = vec![Box::new(optimal_adversary(s)?)];
        opponents.push(Box::new(random_adversary(s, 7)?));
        for a in opponents {
            let o = play_game(s, Box::new(dpfla_learner(s)?), a)?;
            let tr = o.transcript();
            let xs = tr.instances();
            let preds: Vec<Label> = tr
                .rounds
                .iter()
                .map(|r| r.prediction.label().unwrap())
                .collect();
            let reveals: Vec<Label> = tr.rounds.iter().map(|r| r.revealed).collect();
            for k in 0..=t {
                let v = ppfl_dim(s, &xs[..k], &preds[..k], &reveals[..k], t - k)?;
                if v > top {
                    return Ok(Some(format!(
                        "{}: potential {v} > {top} after {k} rounds",
                        describe(s)
                    )));
                }
            }
        }
        Ok(None)
    })?;
    fails.extend(invariants);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..1000 {
        let (m, th, sets) = random_msp_input(&mut rng);
        let (a, b) = (msp(&m, &th, &sets), msp_reference(&m, &th, &sets));
        if a != b {
            fails.push(format!("scale selection input {i}: {a} vs {b}"));
        }
    }
    Verdict::new(
        fails,
        format!("{} games, 1000 scale-selection inputs", family.len()),
    )
}
