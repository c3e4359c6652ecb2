//! Experiment orchestration: tasks over spec files, CSV rows and exit codes.

pub mod family;
pub mod replicate;

use crate::adversaries::adversary_from_config;
use crate::bits::LabelSet;
use crate::dims::{
    default_cap, label_solver, minimax_det_regret, ml_sl_bl_dim, pfl_dim, ppfl_dim,
    set_state_budget, witness_tree, Variant,
};
use crate::dims::{CollectionState, EventRule};
use crate::error::{Error, Result};
use crate::game::CollectionSpace;
use crate::game::{play_game, GameSpec, Measure, Prediction, SpecFile, StrategyConfig, Threshold};
use crate::learners::learner_from_config;
use crate::measure_dims::{grid_solver, minimax_rand_regret, pms_dim};
use crate::setsys::{helly_number, inseparability_report, nested_empty_chain};
use crate::Rational;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

pub const CSV_HEADER: [&str; 9] = [
    "spec",
    "task",
    "horizon",
    "gamma",
    "grid",
    "value_num",
    "value_den",
    "runtime_ms",
    "truncated",
];

/// Exit code for an error: spec problems, budget rejections, anything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::InvalidSpec(_)
        | Error::Io { .. }
        | Error::AdmissibleEmpty
        | Error::TreeSpecMismatch(_) => EXIT_PARSE,
        Error::BudgetExceeded { .. } | Error::GridTooLarge { .. } => EXIT_BUDGET,
        _ => EXIT_FAILED,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Dim,
    Rand,
    Play,
    Sweep,
    Replicate,
}

#[derive(Debug, Clone)]
pub enum SpecSource {
    Path(PathBuf),
    Inline(Box<SpecFile>),
}

impl SpecSource {
    pub fn load(&self) -> Result<(String, SpecFile)> {
        match self {
            SpecSource::Path(p) => {
                let file = SpecFile::load(p)?;
                let name = file.name.clone().unwrap_or_else(|| stem(p));
                Ok((name, file))
            }
            SpecSource::Inline(f) => Ok((
                f.name.clone().unwrap_or_else(|| "inline".into()),
                (**f).clone(),
            )),
        }
    }
}

fn stem(p: &Path) -> String {
    p.file_stem()
        .map_or_else(|| "spec".into(), |s| s.to_string_lossy().into_owned())
}

/// One experiment run: a task over a spec, with sweep axes.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub spec: Option<SpecSource>,
    pub task: Task,
    /// Value computed per row in a sweep (dim or rand).
    pub sweep_task: Task,
    pub horizons: Vec<usize>,
    pub gammas: Vec<Threshold>,
    pub grids: Vec<u32>,
    pub format: OutputFormat,
    pub state_budget: Option<u64>,
    pub seed: u64,
    /// Record wall-clock times; off keeps output byte-identical across runs.
    pub timings: bool,
}

impl ExperimentConfig {
    pub fn new(task: Task, spec: Option<SpecSource>) -> Self {
        ExperimentConfig {
            spec,
            task,
            sweep_task: Task::Dim,
            horizons: Vec::new(),
            gammas: Vec::new(),
            grids: Vec::new(),
            format: OutputFormat::Text,
            state_budget: None,
            seed: 0,
            timings: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.state_budget == Some(0) {
            return Err(Error::Parse("budgets must be positive".into()));
        }
        if !matches!(self.sweep_task, Task::Dim | Task::Rand) {
            return Err(Error::Parse("sweep rows are dim or rand values".into()));
        }
        if self.task != Task::Replicate && self.spec.is_none() {
            return Err(Error::Parse("a spec is required".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResultRow {
    pub spec: String,
    pub task: String,
    pub horizon: usize,
    pub gamma: Option<String>,
    pub grid: Option<u32>,
    #[serde(serialize_with = "ser_rational")]
    pub value: Rational,
    pub runtime_ms: u128,
    pub truncated: bool,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Rows as CSV text with the fixed header; rationals as two integer columns.
pub fn render_csv(rows: &[ResultRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in rows {
        w.write_record([
            r.spec.clone(),
            r.task.clone(),
            r.horizon.to_string(),
            r.gamma.clone().unwrap_or_default(),
            r.grid.map(|g| g.to_string()).unwrap_or_default(),
            r.value.numer().to_string(),
            r.value.denom().to_string(),
            r.runtime_ms.to_string(),
            r.truncated.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

pub fn emit_results(rows: &[ResultRow], path: &Path) -> Result<()> {
    std::fs::write(path, render_csv(rows)).map_err(|e| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

/// What a run produced: printable text, CSV rows and the exit code.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub exit_code: i32,
    pub text: String,
    pub rows: Vec<ResultRow>,
}

impl RunOutput {
    fn ok(text: String, rows: Vec<ResultRow>) -> Self {
        RunOutput {
            exit_code: EXIT_OK,
            text,
            rows,
        }
    }

    pub fn from_error(e: &Error) -> Self {
        RunOutput {
            exit_code: exit_code(e),
            text: format!("error: {e}"),
            rows: Vec::new(),
        }
    }
}

fn elapsed(start: Instant, timings: bool) -> u128 {
    if timings {
        start.elapsed().as_millis()
    } else {
        0
    }
}

fn load_spec(cfg: &ExperimentConfig) -> Result<(String, SpecFile, GameSpec)> {
    let (name, file) = cfg
        .spec
        .as_ref()
        .ok_or_else(|| Error::Parse("a spec is required".into()))?
        .load()?;
    let spec = file.to_spec()?;
    Ok((name, file, spec))
}

fn sweep_value(
    task: Task,
    spec: &GameSpec,
    t: usize,
    gamma: Option<Threshold>,
    grid: u32,
) -> Result<(Rational, bool)> {
    let s = spec.clone().with_horizon(t);
    match (task, gamma) {
        (Task::Dim, None) => Ok((Rational::from_integer(pfl_dim(&s, t)?.into()), false)),
        (Task::Dim, Some(g)) => Ok((
            Rational::from_integer(pms_dim(&s, t, g, grid)?.value.into()),
            true,
        )),
        (_, _) => Ok((minimax_rand_regret(&s, t, grid)?, true)),
    }
}

/// Sweep rows over horizon x gamma x grid, computed in parallel and kept in
/// axis order.
pub fn sweep(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    let (name, _, spec) = load_spec(cfg)?;
    let gammas: Vec<Option<Threshold>> = match (cfg.sweep_task, cfg.gammas.is_empty()) {
        (Task::Dim, false) => cfg.gammas.iter().copied().map(Some).collect(),
        _ => vec![None],
    };
    let grids: Vec<Option<u32>> = match (cfg.sweep_task, gammas[0].is_some()) {
        (Task::Rand, _) | (Task::Dim, true) if !cfg.grids.is_empty() => {
            cfg.grids.iter().copied().map(Some).collect()
        }
        (Task::Rand, _) | (Task::Dim, true) => vec![Some(spec.grid)],
        _ => vec![None],
    };
    let mut keys = Vec::new();
    for &t in &cfg.horizons {
        for &g in &gammas {
            for &m in &grids {
                keys.push((t, g, m));
            }
        }
    }
    let task_name = match (cfg.sweep_task, gammas[0].is_some()) {
        (Task::Dim, false) => "pfl",
        (Task::Dim, true) => "pms",
        _ => "rand_regret",
    };
    keys.par_iter()
        .map(|&(t, gamma, grid)| {
            let start = Instant::now();
            let (value, truncated) =
                sweep_value(cfg.sweep_task, &spec, t, gamma, grid.unwrap_or(spec.grid))?;
            Ok(ResultRow {
                spec: name.clone(),
                task: task_name.into(),
                horizon: t,
                gamma: gamma.map(|g| g.to_string()),
                grid,
                value,
                runtime_ms: elapsed(start, cfg.timings),
                truncated,
            })
        })
        .collect()
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

/// Options of the `dim` command.
#[derive(Debug, Clone, Default)]
pub struct DimQuery {
    pub what: String,
    pub depth: Option<usize>,
    pub witness: bool,
    pub xs: Vec<usize>,
    pub predictions: Vec<u8>,
    pub reveals: Vec<u8>,
}

pub fn dim(cfg: &ExperimentConfig, q: &DimQuery) -> Result<RunOutput> {
    let (name, _, spec) = load_spec(cfg)?;
    let d = q.depth.unwrap_or(spec.horizon);
    let start = Instant::now();
    let value: u32 = match q.what.as_str() {
        "pfl" => pfl_dim(&spec, d)?,
        "ppfl" => ppfl_dim(&spec, &q.xs, &q.predictions, &q.reveals, d)?,
        "ml" | "sl" | "bl" => {
            let v = match q.what.as_str() {
                "ml" => Variant::Ml,
                "sl" => Variant::Sl,
                _ => Variant::Bl,
            };
            let cap = q.depth.map_or_else(|| default_cap(&spec), |d| d as u32);
            ml_sl_bl_dim(&spec, v, cap)?
        }
        "regret" => minimax_det_regret(&spec, d)?,
        other => return Err(Error::Parse(format!("unknown dimension {other:?}"))),
    };
    let mut record = json!({"spec": name, "what": q.what, "depth": d, "value": value});
    if q.witness {
        if q.what != "pfl" {
            return Err(Error::Unsupported(
                "witness trees are available for pfl only".into(),
            ));
        }
        let tree = witness_tree(&mut label_solver(&spec)?, d)?;
        record["witness"] = serde_json::to_value(&tree).expect("trees serialize");
    }
    let row = ResultRow {
        spec: name,
        task: q.what.clone(),
        horizon: d,
        gamma: None,
        grid: None,
        value: Rational::from_integer(value.into()),
        runtime_ms: elapsed(start, cfg.timings),
        truncated: false,
    };
    Ok(RunOutput::ok(pretty(&record), vec![row]))
}

/// Options of the `rand` command.
#[derive(Debug, Clone, Default)]
pub struct RandQuery {
    pub what: String,
    pub gamma: Option<Threshold>,
    pub grid: Option<u32>,
    pub depth: Option<usize>,
    pub xs: Vec<usize>,
    pub measures: Vec<Measure>,
    pub reveals: Vec<u8>,
}

pub fn rand(cfg: &ExperimentConfig, q: &RandQuery) -> Result<RunOutput> {
    let (name, _, spec) = load_spec(cfg)?;
    let d = q.depth.unwrap_or(spec.horizon);
    let g = q.grid.unwrap_or(spec.grid);
    let gamma = q.gamma.unwrap_or_else(Threshold::zero);
    let start = Instant::now();
    let value: Rational = match q.what.as_str() {
        "pms" => Rational::from_integer(pms_dim(&spec, d, gamma, g)?.value.into()),
        "ppms" => {
            let mut solver = grid_solver(Arc::new(CollectionSpace::build(&spec)?), gamma, g)?;
            let preds: Vec<Prediction> = q
                .measures
                .iter()
                .cloned()
                .map(Prediction::Measure)
                .collect();
            let state = CollectionState::from_prefix(
                solver.space(),
                EventRule::Scale(gamma),
                &q.xs,
                &preds,
                &q.reveals,
            )?;
            Rational::from_integer(solver.value(&state, d)?.into())
        }
        "regret" => minimax_rand_regret(&spec, d, g)?,
        other => {
            return Err(Error::Parse(format!(
                "unknown randomized quantity {other:?}"
            )))
        }
    };
    let gamma_col = (q.what != "regret").then(|| gamma.to_string());
    let record = json!({
        "spec": name, "what": q.what, "depth": d, "gamma": gamma_col, "grid": g,
        "value": value.to_string(), "grid_restricted": true,
    });
    let row = ResultRow {
        spec: name,
        task: q.what.clone(),
        horizon: d,
        gamma: gamma_col,
        grid: Some(g),
        value,
        runtime_ms: elapsed(start, cfg.timings),
        truncated: true,
    };
    Ok(RunOutput::ok(pretty(&record), vec![row]))
}

fn label_list(s: LabelSet) -> Vec<u8> {
    s.iter().collect()
}

/// Plays the spec file's learner against its adversary; either may be
/// overridden.
pub fn play(
    cfg: &ExperimentConfig,
    learner: Option<StrategyConfig>,
    adversary: Option<StrategyConfig>,
) -> Result<RunOutput> {
    let (name, file, spec) = load_spec(cfg)?;
    let lc = learner
        .or(file.learner)
        .ok_or_else(|| Error::Parse("no learner configured".into()))?;
    let ac = adversary
        .or(file.adversary)
        .ok_or_else(|| Error::Parse("no adversary configured".into()))?;
    let start = Instant::now();
    let outcome = play_game(
        &spec,
        learner_from_config(&spec, &lc)?,
        adversary_from_config(&spec, &ac)?,
    )?;
    let paths: Vec<Value> = outcome
        .paths
        .iter()
        .take(16)
        .map(|(p, t)| {
            json!({
                "probability": p.to_string(),
                "instances": t.instances(),
                "predictions": t.rounds.iter().map(|r| match &r.prediction {
                    Prediction::Label(y) => y.to_string(),
                    Prediction::Measure(m) => format!("{m:?}"),
                }).collect::<Vec<_>>(),
                "revealed": t.rounds.iter().map(|r| r.revealed).collect::<Vec<_>>(),
                "draws": t.rounds.iter().map(|r| r.draw).collect::<Vec<_>>(),
                "sets": t.final_sets.iter().map(|&s| label_list(s)).collect::<Vec<_>>(),
                "loss": t.loss.to_string(),
                "comparator_loss": t.comparator_loss.to_string(),
            })
        })
        .collect();
    let record = json!({
        "spec": name, "learner": lc.name, "adversary": ac.name, "horizon": spec.horizon,
        "expected_loss": outcome.expected_loss.to_string(),
        "expected_comparator_loss": outcome.expected_comparator.to_string(),
        "expected_regret": outcome.expected_regret.to_string(),
        "n_paths": outcome.paths.len(),
        "paths": paths,
    });
    let row = ResultRow {
        spec: name,
        task: "play".into(),
        horizon: spec.horizon,
        gamma: None,
        grid: None,
        value: outcome.expected_regret,
        runtime_ms: elapsed(start, cfg.timings),
        truncated: false,
    };
    Ok(RunOutput::ok(pretty(&record), vec![row]))
}

/// Helly number and inseparability report of the spec's set system.
pub fn setsys(cfg: &ExperimentConfig, p: Option<usize>, tail: LabelSet) -> Result<RunOutput> {
    let (name, _, spec) = load_spec(cfg)?;
    let sys = &spec.set_system;
    let helly = helly_number(sys)?;
    let p = p.unwrap_or(helly);
    let report = inseparability_report(sys, p, tail)?;
    let chain = nested_empty_chain(sys, tail)?;
    let record = json!({
        "spec": name, "helly": helly, "p": p, "report": report, "nested_chain": chain,
        "union_closed": sys.is_union_closed(), "contains_singletons": sys.contains_singletons(),
    });
    Ok(RunOutput::ok(pretty(&record), Vec::new()))
}

/// Runs the replication suite, printing one line per check.
pub fn replicate_suite(only: Option<usize>) -> RunOutput {
    let mut lines = vec![format!(
        "{:<3} {:<28} {:<6} {}",
        "id", "check", "result", "detail"
    )];
    let mut all = true;
    for c in replicate::CHECKS
        .iter()
        .filter(|c| only.is_none_or(|i| i == c.id))
    {
        let r = replicate::run_check(c);
        all &= r.passed;
        lines.push(format!(
            "{:<3} {:<28} {:<6} {}",
            r.id,
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.detail
        ));
    }
    let failed: Vec<&str> = lines
        .iter()
        .filter(|l| l.contains(" FAIL "))
        .map(|l| l.as_str())
        .collect();
    let mut text = lines.join("\n");
    if !failed.is_empty() {
        text.push_str(&format!("\n{} check(s) failed", failed.len()));
    }
    RunOutput {
        exit_code: if all { EXIT_OK } else { EXIT_FAILED },
        text,
        rows: Vec::new(),
    }
}

/// Runs a config whose task needs no per-command options.
pub fn run(cfg: &ExperimentConfig) -> RunOutput {
    if let Err(e) = cfg.validate() {
        return RunOutput::from_error(&e);
    }
    set_state_budget(cfg.state_budget);
    let result = match cfg.task {
        Task::Replicate => return replicate_suite(None),
        Task::Sweep => sweep(cfg).map(|rows| RunOutput::ok(render_csv(&rows), rows)),
        Task::Dim => dim(
            cfg,
            &DimQuery {
                what: "pfl".into(),
                ..Default::default()
            },
        ),
        Task::Rand => rand(
            cfg,
            &RandQuery {
                what: "regret".into(),
                ..Default::default()
            },
        ),
        Task::Play => play(cfg, None, None),
    };
    result.unwrap_or_else(|e| RunOutput::from_error(&e))
}
