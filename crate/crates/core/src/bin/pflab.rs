use clap::{Args, Parser, Subcommand, ValueEnum};
use pflab_core::bits::LabelSet;
use pflab_core::game::{Measure, SpecFile, StrategyConfig, Threshold};
use pflab_core::harness::{
    self, render_csv, DimQuery, ExperimentConfig, OutputFormat, RandQuery, RunOutput, SpecSource,
    Task, EXIT_PARSE,
};
use pflab_core::{Error, Rational, Result};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "pflab",
    version,
    about = "Exact values and simulations for partial-feedback online learning games"
)]
struct Cli {
    /// Output format: pretty JSON (text) or CSV rows.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record wall-clock milliseconds in the runtime column.
    #[arg(long, global = true)]
    timings: bool,
    /// Cap on memoised solver states.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Deterministic dimensions and minimax regret.
    Dim(DimArgs),
    /// Measure-scale dimensions and randomized minimax regret.
    Rand(RandArgs),
    /// Play a learner against an adversary.
    Play(PlayArgs),
    /// Sweep a value over horizons, scales and grids.
    Sweep(SweepArgs),
    /// Set-system diagnostics.
    Setsys(SetsysArgs),
    /// Run the replication checks.
    Replicate {
        /// Run only the check with this id.
        #[arg(long)]
        only: Option<usize>,
    },
}

#[derive(Args)]
struct DimArgs {
    spec: PathBuf,
    #[arg(long, value_parser = ["pfl", "ppfl", "ml", "sl", "bl", "regret"], default_value = "pfl")]
    what: String,
    /// Depth or cap; defaults to the spec horizon.
    #[arg(long)]
    depth: Option<usize>,
    /// Attach a shattering tree to the output.
    #[arg(long)]
    witness: bool,
    /// Played instances, comma separated.
    #[arg(long, default_value = "")]
    xs: String,
    /// Predicted labels of the played rounds.
    #[arg(long, default_value = "")]
    preds: String,
    /// Revealed labels of the played rounds.
    #[arg(long, default_value = "")]
    reveals: String,
}

#[derive(Args)]
struct RandArgs {
    spec: PathBuf,
    #[arg(long, value_parser = ["pms", "ppms", "regret"], default_value = "pms")]
    what: String,
    #[arg(long)]
    gamma: Option<Threshold>,
    #[arg(long)]
    grid: Option<u32>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, default_value = "")]
    xs: String,
    /// Played measures: weights separated by commas, rounds by semicolons.
    #[arg(long, default_value = "")]
    measures: String,
    #[arg(long, default_value = "")]
    reveals: String,
}

#[derive(Args)]
struct PlayArgs {
    spec: PathBuf,
    /// Learner name; overrides the spec file.
    #[arg(long)]
    learner: Option<String>,
    /// Adversary name; overrides the spec file.
    #[arg(long)]
    adversary: Option<String>,
    /// Seed for the random adversary.
    #[arg(long)]
    seed: Option<i64>,
}

#[derive(Args)]
struct SweepArgs {
    spec: PathBuf,
    #[arg(long, value_parser = ["dim", "rand"], default_value = "dim")]
    task: String,
    /// Horizons as `a..b` (inclusive) or a comma list.
    #[arg(long)]
    horizon: String,
    /// Scales, comma separated; a dim sweep with scales computes measure dimensions.
    #[arg(long, default_value = "")]
    gamma: String,
    /// Grid resolutions, comma separated.
    #[arg(long, default_value = "")]
    grid: String,
}

#[derive(Args)]
struct SetsysArgs {
    spec: PathBuf,
    /// Intersection bound; defaults to the Helly number.
    #[arg(long)]
    p: Option<usize>,
    /// Labels treated as the tail of the system, comma separated.
    #[arg(long, default_value = "")]
    tail: String,
}

fn list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse()
                .map_err(|_| Error::Parse(format!("bad {what} entry {p:?}")))
        })
        .collect()
}

fn horizons(s: &str) -> Result<Vec<usize>> {
    match s.split_once("..") {
        Some((a, b)) => {
            let a: usize = a
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad horizon range {s:?}")))?;
            let b: usize = b
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad horizon range {s:?}")))?;
            Ok((a..=b).collect())
        }
        None => list(s, "horizon"),
    }
}

fn rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad weight {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            Ok(Rational::new(a.into(), b.into()))
        }
        None => Ok(Rational::from_integer(
            s.trim().parse::<i64>().map_err(|_| bad())?.into(),
        )),
    }
}

fn measures(s: &str) -> Result<Vec<Measure>> {
    s.split(';')
        .filter(|r| !r.trim().is_empty())
        .map(|r| {
            let ws = r.split(',').map(rational).collect::<Result<Vec<_>>>()?;
            Measure::from_rationals(&ws)
        })
        .collect()
}

fn strategy(name: Option<String>, params: toml::Table) -> Option<StrategyConfig> {
    name.map(|name| StrategyConfig { name, params })
}

fn config(cli: &Cli, task: Task, spec: Option<&PathBuf>) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(task, spec.map(|p| SpecSource::Path(p.clone())));
    cfg.format = match cli.format {
        Format::Text => OutputFormat::Text,
        Format::Csv => OutputFormat::Csv,
    };
    cfg.timings = cli.timings;
    cfg.state_budget = cli.budget;
    cfg
}

fn execute(cli: &Cli) -> Result<RunOutput> {
    let run = |cfg: &ExperimentConfig, f: &dyn Fn(&ExperimentConfig) -> Result<RunOutput>| {
        cfg.validate()?;
        pflab_core::dims::set_state_budget(cfg.state_budget);
        f(cfg)
    };
    match &cli.command {
        Command::Dim(a) => {
            let q = DimQuery {
                what: a.what.clone(),
                depth: a.depth,
                witness: a.witness,
                xs: list(&a.xs, "instance")?,
                predictions: list(&a.preds, "prediction")?,
                reveals: list(&a.reveals, "reveal")?,
            };
            run(&config(cli, Task::Dim, Some(&a.spec)), &|c| {
                harness::dim(c, &q)
            })
        }
        Command::Rand(a) => {
            let q = RandQuery {
                what: a.what.clone(),
                gamma: a.gamma,
                grid: a.grid,
                depth: a.depth,
                xs: list(&a.xs, "instance")?,
                measures: measures(&a.measures)?,
                reveals: list(&a.reveals, "reveal")?,
            };
            run(&config(cli, Task::Rand, Some(&a.spec)), &|c| {
                harness::rand(c, &q)
            })
        }
        Command::Play(a) => {
            let mut params = toml::Table::new();
            if let Some(seed) = a.seed {
                params.insert("seed".into(), toml::Value::Integer(seed));
            }
            let file = SpecFile::load(&a.spec)?;
            let adversary = strategy(a.adversary.clone(), params.clone()).or_else(|| {
                file.adversary.clone().map(|mut c| {
                    c.params.extend(params);
                    c
                })
            });
            let learner = strategy(a.learner.clone(), toml::Table::new());
            run(&config(cli, Task::Play, Some(&a.spec)), &|c| {
                harness::play(c, learner.clone(), adversary.clone())
            })
        }
        Command::Sweep(a) => {
            let mut cfg = config(cli, Task::Sweep, Some(&a.spec));
            cfg.sweep_task = if a.task == "rand" {
                Task::Rand
            } else {
                Task::Dim
            };
            cfg.horizons = horizons(&a.horizon)?;
            cfg.gammas = list(&a.gamma, "scale")?;
            cfg.grids = list(&a.grid, "grid")?;
            run(&cfg, &|c| {
                let rows = harness::sweep(c)?;
                Ok(RunOutput {
                    exit_code: 0,
                    text: render_csv(&rows),
                    rows,
                })
            })
        }
        Command::Setsys(a) => {
            let tail = LabelSet::from_labels(list::<u8>(&a.tail, "label")?);
            run(&config(cli, Task::Dim, Some(&a.spec)), &|c| {
                harness::setsys(c, a.p, tail)
            })
        }
        Command::Replicate { only } => Ok(harness::replicate_suite(*only)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = execute(&cli).unwrap_or_else(|e| RunOutput::from_error(&e));
    let body = match cli.format {
        Format::Csv if !out.rows.is_empty() => render_csv(&out.rows),
        _ => out.text.clone(),
    };
    let failed = out.exit_code != 0 && out.rows.is_empty() && out.text.starts_with("error:");
    if failed {
        eprintln!("{body}");
    } else if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &body) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(EXIT_PARSE as u8);
        }
    } else {
        // A closed pipe downstream is not an error worth reporting.
        let mut stdout = std::io::stdout().lock();
        let _ = stdout.write_all(body.as_bytes());
        if !body.ends_with('\n') {
            let _ = stdout.write_all(b"\n");
        }
    }
    ExitCode::from(out.exit_code as u8)
}
