//! Run configuration, stored as TOML.
//!
//! Every section is optional except `[model]`, which must at least set `r2`.
//! Defaults reproduce the regular-dynamics reference setup: `r1 = 3.0`,
//! `c1 = 1.8`, `c2 = 0.1`, `c3 = 0.6`, `c4 = 2.5`, start `(0.2, 0.1)`,
//! 400 transient iterations. Unknown keys are rejected.
//!
//! ```toml
//! [model]
//! r2 = 3.5
//!
//! [sweep]
//! parameter = "r2"
//! lo = 2.8
//! hi = 4.0
//! points = 241
//! ```

use ecokmap_core::orbit::PeriodCriteria;
use ecokmap_core::sweep::{Budget, ChaosGridSpec, GridAxis, SweepSpec};
use ecokmap_core::{ModelParams, Param, State};
use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    #[serde(default = "defaults::r1")]
    pub r1: f64,
    /// Control parameter; required.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r2: Option<f64>,
    #[serde(default = "defaults::c1")]
    pub c1: f64,
    #[serde(default = "defaults::c2")]
    pub c2: f64,
    #[serde(default = "defaults::c3")]
    pub c3: f64,
    #[serde(default = "defaults::c4")]
    pub c4: f64,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            r1: defaults::r1(),
            r2: None,
            c1: defaults::c1(),
            c2: defaults::c2(),
            c3: defaults::c3(),
            c4: defaults::c4(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialSection {
    pub x0: f64,
    pub y0: f64,
}

impl Default for InitialSection {
    fn default() -> Self {
        Self { x0: 0.2, y0: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BudgetSection {
    pub transient: usize,
    pub record: usize,
    /// Lyapunov steps per sweep or grid point.
    pub lyap: usize,
    pub max_period: usize,
    pub period_tol: f64,
}

impl Default for BudgetSection {
    fn default() -> Self {
        Self {
            transient: 400,
            record: 100,
            lyap: 20_000,
            max_period: 64,
            period_tol: 1e-6,
        }
    }
}

/// Settings for the single-orbit `lyapunov` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LyapunovSection {
    pub iterations: usize,
    /// Keep every `stride`-th running estimate in the CSV.
    pub stride: usize,
}

impl Default for LyapunovSection {
    fn default() -> Self {
        Self {
            iterations: 100_000,
            stride: 100,
        }
    }
}

/// Iteration window of the phase portrait: states `from + 1 ..= to`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhaseSection {
    pub from: usize,
    pub to: usize,
}

impl Default for PhaseSection {
    fn default() -> Self {
        Self { from: 500, to: 600 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub parameter: Param,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            parameter: Param::R2,
            lo: 2.8,
            hi: 4.0,
            points: 241,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub c2_lo: f64,
    pub c2_hi: f64,
    pub c2_points: usize,
    pub c3_lo: f64,
    pub c3_hi: f64,
    pub c3_points: usize,
    pub r2_values: Vec<f64>,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            c2_lo: 0.1,
            c2_hi: 0.8,
            c2_points: 15,
            c3_lo: 0.1,
            c3_hi: 0.8,
            c3_points: 15,
            r2_values: vec![3.9, 3.95, 4.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: "out".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub initial: InitialSection,
    #[serde(default)]
    pub budget: BudgetSection,
    #[serde(default)]
    pub lyapunov: LyapunovSection,
    #[serde(default)]
    pub phase: PhaseSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub output: OutputSection,
}

mod defaults {
    pub fn r1() -> f64 {
        3.0
    }
    pub fn c1() -> f64 {
        1.8
    }
    pub fn c2() -> f64 {
        0.1
    }
    pub fn c3() -> f64 {
        0.6
    }
    pub fn c4() -> f64 {
        2.5
    }
}

/// Parses and validates a TOML document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let config: RunConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e
            .span()
            .map(|span| line_col(text, span.start))
            .unwrap_or((1, 1));
        ConfigError::Parse {
            line,
            column,
            message: e.message().trim().to_string(),
        }
    })?;
    config.validate()?;
    Ok(config)
}

/// TOML text that [`parse_config`] maps back to an equal config.
pub fn serialize_config(config: &RunConfig) -> String {
    toml::to_string(config).expect("config fields are all TOML-representable")
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn invalid(key: &str, constraint: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        constraint: constraint.into(),
    }
}

fn check_param(key: &str, param: Param, value: f64) -> Result<(), ConfigError> {
    param.validate(value).map(drop).map_err(|e| match e {
        ecokmap_core::Error::InvalidParameter { constraint, .. } => invalid(key, constraint),
        other => invalid(key, other.to_string()),
    })
}

fn check_axis(prefix: &str, lo: f64, hi: f64, points: usize) -> Result<(), ConfigError> {
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(invalid(
            &format!("{prefix}_lo"),
            format!("must be below {prefix}_hi"),
        ));
    }
    if points < 2 {
        return Err(invalid(&format!("{prefix}_points"), "must be at least 2"));
    }
    Ok(())
}

impl RunConfig {
    /// Config with defaults everywhere and the given control parameter.
    pub fn with_r2(r2: f64) -> Self {
        Self {
            model: ModelSection {
                r2: Some(r2),
                ..ModelSection::default()
            },
            initial: InitialSection::default(),
            budget: BudgetSection::default(),
            lyapunov: LyapunovSection::default(),
            phase: PhaseSection::default(),
            sweep: SweepSection::default(),
            grid: GridSection::default(),
            output: OutputSection::default(),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let m = &self.model;
        let r2 = m.r2.ok_or_else(|| {
            invalid(
                "model.r2",
                "is required (the control parameter has no default)",
            )
        })?;
        check_param("model.r1", Param::R1, m.r1)?;
        check_param("model.r2", Param::R2, r2)?;
        check_param("model.c1", Param::C1, m.c1)?;
        check_param("model.c2", Param::C2, m.c2)?;
        check_param("model.c3", Param::C3, m.c3)?;
        check_param("model.c4", Param::C4, m.c4)?;

        if !self.initial.x0.is_finite() {
            return Err(invalid("initial.x0", "must be finite"));
        }
        if !self.initial.y0.is_finite() {
            return Err(invalid("initial.y0", "must be finite"));
        }

        let b = &self.budget;
        if b.record == 0 {
            return Err(invalid("budget.record", "must be positive"));
        }
        if b.lyap < ecokmap_core::lyapunov::MIN_STEPS {
            return Err(invalid("budget.lyap", "must be at least 100"));
        }
        if b.max_period == 0 {
            return Err(invalid("budget.max_period", "must be positive"));
        }
        if !(b.period_tol >= 0.0 && b.period_tol.is_finite()) {
            return Err(invalid(
                "budget.period_tol",
                "must be finite and non-negative",
            ));
        }

        if self.lyapunov.iterations < ecokmap_core::lyapunov::MIN_STEPS {
            return Err(invalid("lyapunov.iterations", "must be at least 100"));
        }
        if self.lyapunov.stride == 0 {
            return Err(invalid("lyapunov.stride", "must be positive"));
        }
        if self.phase.to <= self.phase.from {
            return Err(invalid("phase.to", "must exceed phase.from"));
        }

        let s = &self.sweep;
        if s.lo.is_nan() || s.hi.is_nan() || s.lo >= s.hi {
            return Err(invalid("sweep.lo", "must be below sweep.hi"));
        }
        if s.points < 2 {
            return Err(invalid("sweep.points", "must be at least 2"));
        }
        check_param("sweep.lo", s.parameter, s.lo)?;
        check_param("sweep.hi", s.parameter, s.hi)?;

        let g = &self.grid;
        check_axis("grid.c2", g.c2_lo, g.c2_hi, g.c2_points)?;
        check_axis("grid.c3", g.c3_lo, g.c3_hi, g.c3_points)?;
        check_param("grid.c2_lo", Param::C2, g.c2_lo)?;
        check_param("grid.c3_lo", Param::C3, g.c3_lo)?;
        if g.r2_values.is_empty() {
            return Err(invalid("grid.r2_values", "must list at least one value"));
        }
        for &r2 in &g.r2_values {
            check_param("grid.r2_values", Param::R2, r2)?;
        }
        if self.output.dir.is_empty() {
            return Err(invalid("output.dir", "must not be empty"));
        }
        Ok(())
    }

    pub fn params(&self) -> ModelParams {
        let m = &self.model;
        ModelParams::new(m.r1, m.r2.unwrap_or(f64::NAN), m.c1, m.c2, m.c3, m.c4)
            .expect("validated config")
    }

    pub fn initial_state(&self) -> State {
        State::new(self.initial.x0, self.initial.y0).expect("validated config")
    }

    pub fn budget(&self) -> Budget {
        let b = &self.budget;
        Budget {
            n_transient: b.transient,
            n_record: b.record,
            n_lyap: b.lyap,
            period: self.period_criteria(),
        }
    }

    pub fn period_criteria(&self) -> PeriodCriteria {
        PeriodCriteria {
            max_period: self.budget.max_period,
            tol: self.budget.period_tol,
        }
    }

    pub fn sweep_spec(&self) -> SweepSpec {
        SweepSpec {
            base: self.params(),
            parameter: self.sweep.parameter,
            range: GridAxis::new(self.sweep.lo, self.sweep.hi, self.sweep.points),
            s0: self.initial_state(),
            budget: self.budget(),
        }
    }

    pub fn chaos_grid_spec(&self) -> ChaosGridSpec {
        let g = &self.grid;
        ChaosGridSpec {
            base: self.params(),
            c2: GridAxis::new(g.c2_lo, g.c2_hi, g.c2_points),
            c3: GridAxis::new(g.c3_lo, g.c3_hi, g.c3_points),
            r2_values: g.r2_values.clone(),
            s0: self.initial_state(),
            budget: self.budget(),
        }
    }
}
