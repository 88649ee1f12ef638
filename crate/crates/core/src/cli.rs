//! Command-line front end: each command loads a [`RunConfig`], runs one
//! analysis and writes its artifacts to the output directory.
//!
//! Exit codes: 0 on success, 2 when the model fails the dissipativity test,
//! 1 on any other error.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use log::info;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::analysis::{
    self, attractor_bracket, classify_dynamics, fixed_points, gamma_order_stats, limit_cycle, Report,
};
use crate::config::{RunConfig, SweepParameter};
use crate::error::{Error, Result};
use crate::scenarios::{Model, ScenarioId};
use crate::solver::{Integrator, Trajectory};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_NOT_DISSIPATIVE: i32 = 2;

const DEFAULT_OUT: &str = "crawlgait-out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Integrate from `v0` over a number of periods.
    Simulate,
    /// Iterate the period map from `v0`.
    Poincare,
    /// Bracket the attractor by iterating from both ends of the absorbing box.
    Attractor,
    /// Locate and classify fixed points of the period map.
    FixedPoints,
    /// Periodic orbit through `v0` and its net displacement.
    LimitCycle,
    /// Order statistics of the negated shape velocities.
    GammaStats,
    /// Dissipativity test and applicable uniqueness result.
    Check,
    /// Run one command for each value of a parameter, in parallel.
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Poincare => "poincare",
            Command::Attractor => "attractor",
            Command::FixedPoints => "fixed-points",
            Command::LimitCycle => "limit-cycle",
            Command::GammaStats => "gamma-stats",
            Command::Check => "check",
            Command::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "crawlgait", version, about = "Periodic gaits of crawlers with friction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Built-in scenario; replaces the model of the configuration.
    #[arg(long, global = true)]
    pub scenario: Option<String>,
    /// Initial velocity.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub v0: Option<f64>,
    /// Number of periods to integrate or iterate.
    #[arg(long, global = true)]
    pub periods: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Diagnostics go to stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_FAILURE } else { EXIT_OK };
        }
    };
    match resolve(&cli).and_then(|(cfg, out)| run_command(&cfg, cli.command, &out)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Dissipativity { .. } => EXIT_NOT_DISSIPATIVE,
        _ => EXIT_FAILURE,
    }
}

/// Merges the flags into the configuration file (flags win).
pub fn resolve(cli: &Cli) -> Result<(RunConfig, PathBuf)> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            let mut value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::config("/", e.to_string()))?;
            if let (Some(_), Some(obj)) = (&cli.scenario, value.as_object_mut()) {
                obj.remove("model");
            }
            if let (Some(s), Some(obj)) = (&cli.scenario, value.as_object_mut()) {
                obj.insert("scenario".into(), json!(s));
            }
            RunConfig::from_json(&value.to_string())?
        }
        None => {
            let Some(s) = &cli.scenario else {
                return Err(Error::config("/", "give --config or --scenario"));
            };
            RunConfig::scenario(s.parse::<ScenarioId>()?)
        }
    };
    if cli.v0.is_some() {
        cfg.v0 = cli.v0;
    }
    if cli.periods.is_some() {
        cfg.periods = cli.periods;
    }
    if cli.out.is_some() {
        cfg.out = cli.out.clone();
    }
    cfg.validate()?;
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    Ok((cfg, out))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    Ok(())
}

fn range(xs: &[f64]) -> [f64; 2] {
    xs.iter().fold([f64::INFINITY, f64::NEG_INFINITY], |[lo, hi], &x| [lo.min(x), hi.max(x)])
}

fn write_trajectory(out: &Path, traj: &Trajectory) -> Result<()> {
    traj.write_csv(BufWriter::new(File::create(out.join("trajectory.csv"))?))?;
    write_json(
        &out.join("plot.manifest.json"),
        &json!({
            "plots": [
                {"file": "trajectory.csv", "x": "t", "y": ["v"], "x_range": range(&traj.t), "y_range": range(&traj.v),
                 "title": "barycentre velocity"},
                {"file": "trajectory.csv", "x": "t", "y": ["x"], "x_range": range(&traj.t), "y_range": range(&traj.x),
                 "title": "barycentre displacement"}
            ]
        }),
    )
}

fn require_dissipative(report: &Report) -> Result<()> {
    if report.dissipativity.pass {
        Ok(())
    } else {
        Err(Error::Dissipativity {
            i_plus: report.dissipativity.i_plus,
            i_minus: report.dissipativity.i_minus,
        })
    }
}

/// Runs `command` and writes artifacts under `out`.
pub fn run_command(cfg: &RunConfig, command: Command, out: &Path) -> Result<i32> {
    fs::create_dir_all(out)?;
    if command == Command::Sweep {
        return run_sweep(cfg, out);
    }
    let model = cfg.build_model()?;
    let dynamics = model.reduce()?;
    let solver = cfg.solver;
    let tol = cfg.tol.unwrap_or(analysis::DEFAULT_BRACKET_TOL);
    let kmax = cfg.max_iterations.unwrap_or(analysis::DEFAULT_MAX_ITERATIONS);
    let period = dynamics.period();
    let report = Report::new(&dynamics)?;
    info!("{} on a {:?} model, T = {period}", command.name(), dynamics.kind());
    match command {
        Command::Simulate => {
            let v0 = cfg.v0.unwrap_or(0.0);
            let periods = cfg.periods.unwrap_or(1);
            let traj = Integrator::new(&dynamics, solver)?.integrate(v0, 0.0, periods as f64 * period)?;
            write_trajectory(out, &traj)?;
            write_json(&out.join("report.json"), &report)?;
            println!("final v = {:.12}", traj.final_v());
            println!("displacement = {:.12}", traj.displacement());
        }
        Command::Poincare => {
            let v0 = cfg.v0.unwrap_or(0.0);
            let k = cfg.periods.unwrap_or(1);
            let iterates = Integrator::new(&dynamics, solver)?.iterates(v0, k)?;
            let mut f = BufWriter::new(File::create(out.join("poincare.csv"))?);
            writeln!(f, "k,v")?;
            writeln!(f, "0,{v0:.16e}")?;
            for (i, v) in iterates.iter().enumerate() {
                writeln!(f, "{},{v:.16e}", i + 1)?;
                println!("{v:.12}");
            }
            write_json(&out.join("report.json"), &report)?;
        }
        Command::Attractor => {
            require_dissipative(&report)?;
            let a = attractor_bracket(&dynamics, &solver, tol, kmax)?;
            write_json(&out.join("attractor.json"), &a)?;
            write_json(&out.join("report.json"), &report.with_attractor(&a))?;
            println!("alpha = {:.12}", a.alpha);
            println!("beta = {:.12}", a.beta);
            if !a.converged {
                eprintln!("warning: bracket did not converge in {} iterations", a.iterations);
            }
        }
        Command::FixedPoints => {
            require_dissipative(&report)?;
            let tol = cfg.tol.unwrap_or(1e-4);
            let a = attractor_bracket(&dynamics, &solver, tol.min(analysis::DEFAULT_BRACKET_TOL), kmax)?;
            let grid = cfg.grid_n.unwrap_or(analysis::DEFAULT_FIXED_POINT_GRID);
            let f = fixed_points(&dynamics, &a, grid, tol, &solver)?;
            write_json(&out.join("report.json"), &report.with_attractor(&a).with_fixed_points(&f))?;
            for p in &f.points {
                println!("fixed point {:.9} ({})", p.v, p.class);
            }
            for (lo, hi) in &f.plateaus {
                println!("plateau [{lo:.9}, {hi:.9}]");
            }
        }
        Command::LimitCycle => {
            let v_star = match cfg.v0 {
                Some(v) => v,
                None => {
                    require_dissipative(&report)?;
                    attractor_bracket(&dynamics, &solver, tol, kmax)?.alpha
                }
            };
            let ptol = cfg.periodicity_tol.unwrap_or(analysis::DEFAULT_PERIODICITY_TOL);
            let c = limit_cycle(&dynamics, v_star, &solver, ptol)?;
            write_trajectory(out, &c.orbit)?;
            write_json(&out.join("report.json"), &report.with_cycle(&c))?;
            println!("gamma = {:.12}", c.gamma);
            println!("average velocity = {:.12}", c.average_velocity);
        }
        Command::GammaStats => {
            let w = match &model {
                Model::Discrete(d) => d.shape_velocities().to_vec(),
                Model::Continuous(_) => {
                    return Err(Error::config("/model", "gamma-stats needs a discrete model"));
                }
            };
            let g = gamma_order_stats(&w, cfg.grid_n.unwrap_or(analysis::DEFAULT_GAMMA_GRID))?;
            let mut f = BufWriter::new(File::create(out.join("gamma.csv"))?);
            let header: Vec<String> = (1..=w.len()).map(|j| format!("gamma{j}")).collect();
            writeln!(f, "t,{}", header.join(","))?;
            for (t, row) in g.times.iter().zip(&g.gammas) {
                let cells: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
                writeln!(f, "{t:.16e},{}", cells.join(","))?;
            }
            write_json(
                &out.join("gamma.json"),
                &json!({"min_gap": g.min_gap, "continuous": g.continuous, "warnings": g.warnings}),
            )?;
            write_json(&out.join("report.json"), &report)?;
            for (j, gap) in g.min_gap.iter().enumerate() {
                println!("min gap {}-{} = {gap:.12}", j + 1, j + 2);
            }
        }
        Command::Check => {
            let c = classify_dynamics(&dynamics);
            write_json(&out.join("report.json"), &report)?;
            write_json(&out.join("classification.json"), &c)?;
            println!(
                "dissipativity {}: I+ = {:.9}, I- = {:.9}",
                if report.dissipativity.pass { "pass" } else { "FAIL" },
                report.dissipativity.i_plus,
                report.dissipativity.i_minus
            );
            println!("theorem: {} (uniqueness predicted: {})", c.theorem, c.uniqueness_predicted);
            for r in &c.reasons {
                println!("  - {r}");
            }
            if let Some(a) = &c.advisory {
                println!("  advisory: {a}");
            }
            require_dissipative(&report)?;
        }
        Command::Sweep => unreachable!(),
    }
    Ok(EXIT_OK)
}

fn run_sweep(cfg: &RunConfig, out: &Path) -> Result<i32> {
    let Some(sweep) = &cfg.sweep else {
        return Err(Error::config("/sweep", "the sweep command needs a `sweep` section"));
    };
    let command = Command::from_str(&sweep.command, false)
        .map_err(|_| Error::config("/sweep/command", format!("unknown command `{}`", sweep.command)))?;
    if command == Command::Sweep {
        return Err(Error::config("/sweep/command", "sweeps do not nest"));
    }
    let results: Vec<(f64, i32, Option<String>)> = sweep
        .values
        .par_iter()
        .enumerate()
        .map(|(k, &value)| {
            let mut run = cfg.clone();
            run.sweep = None;
            match sweep.parameter {
                SweepParameter::Alpha => run.alpha = Some(value),
                SweepParameter::Period => run.period = Some(value),
                SweepParameter::Load => run.load = Some(value),
                SweepParameter::Theta => run.theta = Some(value),
                SweepParameter::V0 => run.v0 = Some(value),
            }
            let dir = out.join(format!("run-{k:03}"));
            let outcome = run.validate().and_then(|_| run_command(&run, command, &dir));
            match outcome {
                Ok(code) => (value, code, None),
                Err(e) => {
                    eprintln!("run {k} ({value}): {e}");
                    (value, exit_code(&e), Some(e.to_string()))
                }
            }
        })
        .collect();
    let runs: Vec<_> = results
        .iter()
        .enumerate()
        .map(|(k, (value, code, err))| json!({"dir": format!("run-{k:03}"), "value": value, "exit": code, "error": err}))
        .collect();
    write_json(
        &out.join("sweep.json"),
        &json!({"command": command, "parameter": sweep.parameter, "runs": runs}),
    )?;
    let worst = results.iter().map(|r| r.1).fold(EXIT_OK, |acc, c| match (acc, c) {
        (EXIT_FAILURE, _) | (_, EXIT_FAILURE) => EXIT_FAILURE,
        (a, b) => a.max(b),
    });
    Ok(worst)
}
