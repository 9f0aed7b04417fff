//! Subcommand implementations. Each writes its CSV (and SVG with `--plot`)
//! into the output directory and returns the paths plus a short summary.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ecokmap_core::equilibria::stability_report;
use ecokmap_core::lyapunov::{lambda_series, lyapunov_spectrum};
use ecokmap_core::orbit::{iterate_with, OrbitRecord, Outcome};
use ecokmap_core::sweep::{bifurcation_sweep, chaos_grid, SweepResult};

use crate::config::{parse_config, RunConfig};
use crate::csv;
use crate::error::CliError;
use crate::svg::{self, Marker, Series};

#[derive(Debug, Parser)]
#[command(
    name = "ecokmap",
    version,
    about = "Discrete two-species competition map: orbits, equilibria, Lyapunov exponents, sweeps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Iterate one orbit and write its post-transient states
    Simulate(RunArgs),
    /// Enumerate and classify fixed points
    FixedPoints(RunArgs),
    /// Sweep one parameter and record attractor tails, periods and λ₁
    Bifurcate(RunArgs),
    /// Lyapunov spectrum and its running estimate λ(n)
    Lyapunov(RunArgs),
    /// Largest Lyapunov exponent over the (c2, c3) plane
    ChaosGrid(RunArgs),
    /// Phase portrait over an iteration window (default 500..600)
    Phase(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Component {
    X,
    #[default]
    Y,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// TOML run configuration
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory (overrides `output.dir`)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write an SVG plot
    #[arg(long)]
    pub plot: bool,
    /// Recorded states (simulate, bifurcate, phase) or Lyapunov iterations
    /// (lyapunov, chaos-grid)
    #[arg(long)]
    pub steps: Option<usize>,
    /// Transient iterations (for phase: start of the window)
    #[arg(long)]
    pub transient: Option<usize>,
    /// Sweep points (bifurcate) or points per axis (chaos-grid)
    #[arg(long)]
    pub grid: Option<usize>,
    /// Relative tolerance for period detection
    #[arg(long = "seed-tolerance")]
    pub seed_tolerance: Option<f64>,
    /// Population plotted on the bifurcation diagram's vertical axis
    #[arg(long, value_enum, default_value_t = Component::Y)]
    pub component: Component,
}

impl Command {
    pub fn args(&self) -> &RunArgs {
        match self {
            Command::Simulate(a)
            | Command::FixedPoints(a)
            | Command::Bifurcate(a)
            | Command::Lyapunov(a)
            | Command::ChaosGrid(a)
            | Command::Phase(a) => a,
        }
    }
}

#[derive(Debug, Default)]
pub struct Outputs {
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
}

/// Loads the config named in the arguments, applies flag overrides and runs.
pub fn run(command: &Command) -> Result<Outputs, CliError> {
    let args = command.args();
    let text = fs::read_to_string(&args.config).map_err(|source| CliError::Read {
        path: args.config.clone(),
        source,
    })?;
    let mut config = parse_config(&text)?;
    apply_overrides(command, &mut config);
    config.validate()?;
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(&config.output.dir));
    execute(command, &config, &out)
}

pub fn apply_overrides(command: &Command, config: &mut RunConfig) {
    let args = command.args();
    if let Some(tol) = args.seed_tolerance {
        config.budget.period_tol = tol;
    }
    match command {
        Command::Phase(_) => {
            let window = config.phase.to.saturating_sub(config.phase.from);
            if let Some(t) = args.transient {
                config.phase.from = t;
            }
            config.phase.to = config.phase.from + args.steps.unwrap_or(window);
        }
        _ => {
            if let Some(t) = args.transient {
                config.budget.transient = t;
            }
        }
    }
    if let Some(n) = args.steps {
        match command {
            Command::Simulate(_) | Command::Bifurcate(_) => config.budget.record = n,
            Command::Lyapunov(_) => config.lyapunov.iterations = n,
            Command::ChaosGrid(_) => config.budget.lyap = n,
            Command::FixedPoints(_) | Command::Phase(_) => {}
        }
    }
    if let Some(n) = args.grid {
        match command {
            Command::Bifurcate(_) => config.sweep.points = n,
            Command::ChaosGrid(_) => {
                config.grid.c2_points = n;
                config.grid.c3_points = n;
            }
            _ => {}
        }
    }
}

/// Runs a validated config, writing into `out`.
pub fn execute(command: &Command, config: &RunConfig, out: &Path) -> Result<Outputs, CliError> {
    fs::create_dir_all(out).map_err(|source| CliError::Write {
        path: out.to_path_buf(),
        source,
    })?;
    let mut outputs = Outputs::default();
    let plot = command.args().plot;
    let p = config.params();
    let s0 = config.initial_state();

    match command {
        Command::Simulate(_) => {
            let b = &config.budget;
            let record = iterate_with(
                &p,
                s0,
                b.transient + b.record,
                b.transient,
                config.period_criteria(),
            )?;
            outputs.summary.push(orbit_summary(&record));
            outputs.write(out, "orbit.csv", csv::orbit_csv(&record))?;
            if plot {
                outputs.write(out, "orbit.svg", phase_svg(&record, "orbit"))?;
            }
        }
        Command::FixedPoints(_) => {
            let report = stability_report(&p);
            for e in &report.fixed_points {
                let mut line = format!(
                    "{:?} at ({}, {}): |λ| = ({:.6}, {:.6}) {:?}{}",
                    e.family,
                    e.x,
                    e.y,
                    e.modulus1,
                    e.modulus2,
                    e.classification,
                    if e.feasible { "" } else { " [infeasible]" }
                );
                if let Some(t) = e.table_condition {
                    line.push_str(&format!(", table condition {t}"));
                }
                outputs.summary.push(line);
            }
            for s in &report.skipped {
                outputs
                    .summary
                    .push(format!("{:?} skipped: {:?}", s.family, s.reason));
            }
            let text = toml::to_string(&report).expect("report is TOML-representable");
            outputs.write(out, "fixed_points.toml", text)?;
        }
        Command::Bifurcate(args) => {
            let result = bifurcation_sweep(&config.sweep_spec())?;
            let chaotic = result
                .points
                .iter()
                .filter(|pt| pt.result.lambda1.is_some_and(|l| l > 0.0))
                .count();
            outputs.summary.push(format!(
                "{} grid values of {}; {} with λ₁ > 0",
                result.points.len(),
                result.parameter,
                chaotic
            ));
            outputs.write(out, "bifurcation.csv", csv::bifurcation_csv(&result))?;
            if plot {
                outputs.write(
                    out,
                    "bifurcation.svg",
                    bifurcation_svg(&result, args.component),
                )?;
            }
        }
        Command::Lyapunov(_) => {
            let res =
                lyapunov_spectrum(&p, s0, config.budget.transient, config.lyapunov.iterations)?;
            outputs.summary.push(format!(
                "λ₁ = {}, λ₂ = {} over {} iterations{}",
                res.lambda1,
                res.lambda2,
                res.n_used,
                if res.escaped { " (orbit escaped)" } else { "" }
            ));
            let series = lambda_series(&res, config.lyapunov.stride);
            outputs.write(out, "lyapunov.csv", csv::lyapunov_csv(&series))?;
            if plot {
                let pick = |f: fn(&ecokmap_core::SeriesPoint) -> f64| {
                    series.iter().map(|pt| (pt.n as f64, f(pt))).collect()
                };
                let chart = svg::lines(
                    "running Lyapunov exponents",
                    "n",
                    "λ",
                    &[
                        Series {
                            name: "λ₁",
                            color: "#c0392b",
                            points: pick(|pt| pt.lambda1),
                        },
                        Series {
                            name: "λ₂",
                            color: "#1f4e9c",
                            points: pick(|pt| pt.lambda2),
                        },
                    ],
                );
                outputs.write(out, "lyapunov.svg", chart)?;
            }
        }
        Command::ChaosGrid(_) => {
            let grid = chaos_grid(&config.chaos_grid_spec())?;
            let chaotic = grid
                .cells
                .iter()
                .filter(|c| c.lambda1.is_some_and(|l| l > 0.0))
                .count();
            outputs.summary.push(format!(
                "{} cells; {} with λ₁ > 0",
                grid.cells.len(),
                chaotic
            ));
            outputs.write(out, "chaos_grid.csv", csv::chaos_grid_csv(&grid))?;
            if plot {
                outputs.write(out, "chaos_grid.svg", svg::heatmap(&grid))?;
            }
        }
        Command::Phase(_) => {
            let ph = &config.phase;
            let record = iterate_with(&p, s0, ph.to, ph.from, config.period_criteria())?;
            outputs.summary.push(orbit_summary(&record));
            outputs.write(out, "phase.csv", csv::orbit_csv(&record))?;
            if plot {
                let title = format!("phase portrait, iterations {}..{}", ph.from + 1, ph.to);
                outputs.write(out, "phase.svg", phase_svg(&record, &title))?;
            }
        }
    }
    Ok(outputs)
}

impl Outputs {
    fn write(&mut self, dir: &Path, name: &str, contents: String) -> Result<(), CliError> {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?;
        self.files.push(path);
        Ok(())
    }
}

fn orbit_summary(record: &OrbitRecord) -> String {
    let mut line = match record.outcome {
        Outcome::Settled(k) => format!("settled, period {k}"),
        Outcome::Aperiodic => "aperiodic".to_string(),
        Outcome::Escaped(n) => format!("escaped at iteration {n}"),
    };
    match record.extinct() {
        (true, true) => line.push_str("; both species extinct"),
        (true, false) => line.push_str("; species x extinct"),
        (false, true) => line.push_str("; species y extinct"),
        (false, false) => {}
    }
    line
}

fn phase_svg(record: &OrbitRecord, title: &str) -> String {
    let markers: Vec<_> = record
        .tail
        .iter()
        .map(|s| Marker::Point { x: s.x(), y: s.y() })
        .collect();
    svg::scatter(title, "x", "y", &markers)
}

/// One marker per CSV row, in the same order.
fn bifurcation_svg(result: &SweepResult, component: Component) -> String {
    let mut markers = Vec::new();
    for pt in &result.points {
        if pt.result.tail.is_empty() {
            markers.push(Marker::Escaped { x: pt.value });
        }
        for s in &pt.result.tail {
            let y = match component {
                Component::X => s.x(),
                Component::Y => s.y(),
            };
            markers.push(Marker::Point { x: pt.value, y });
        }
    }
    let label = match component {
        Component::X => "x",
        Component::Y => "y",
    };
    svg::scatter(
        &format!("bifurcation diagram in {}", result.parameter),
        result.parameter.name(),
        label,
        &markers,
    )
}
