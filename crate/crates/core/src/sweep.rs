//! Bifurcation sweeps and coupling-plane chaos grids.
//!
//! Each grid point runs an orbit (transient then recorded tail, with period
//! detection) and a Lyapunov estimate from the same start. Points are
//! evaluated through [`map_indexed`], so output order is the grid order for any
//! worker count.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{map_indexed, Workers};
use crate::lyapunov::{lyapunov_spectrum_with, SeriesMode, MIN_STEPS};
use crate::model::{ModelParams, Param, State};
use crate::orbit::{iterate_with, Outcome, PeriodCriteria};

/// Per-point iteration budgets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Budget {
    pub n_transient: usize,
    pub n_record: usize,
    pub n_lyap: usize,
    pub period: PeriodCriteria,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            n_transient: 400,
            n_record: 100,
            n_lyap: 20_000,
            period: PeriodCriteria::default(),
        }
    }
}

impl Budget {
    fn validate(&self) -> Result<()> {
        if self.n_record == 0 {
            return Err(Error::InvalidSpec("n_record must be positive".into()));
        }
        if self.n_lyap < MIN_STEPS {
            return Err(Error::InvalidSpec(format!(
                "n_lyap must be at least {MIN_STEPS}"
            )));
        }
        if self.period.max_period == 0 || self.period.tol.is_nan() || self.period.tol < 0.0 {
            return Err(Error::InvalidSpec(
                "max_period must be positive and period_tol non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// Evenly spaced values on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridAxis {
    pub lo: f64,
    pub hi: f64,
    pub n_points: usize,
}

impl GridAxis {
    pub fn new(lo: f64, hi: f64, n_points: usize) -> Self {
        Self { lo, hi, n_points }
    }

    fn validate(&self, param: Param) -> Result<()> {
        if self.lo.is_nan() || self.hi.is_nan() || self.lo >= self.hi {
            return Err(Error::InvalidSpec(format!(
                "{param} range needs lo < hi (got {} .. {})",
                self.lo, self.hi
            )));
        }
        if self.n_points < 2 {
            return Err(Error::InvalidSpec(format!(
                "{param} grid needs at least 2 points"
            )));
        }
        param.validate(self.lo)?;
        param.validate(self.hi)?;
        Ok(())
    }

    /// `lo + i·(hi − lo)/(n − 1)`, with the last value set to `hi` exactly.
    pub fn value(&self, i: usize) -> f64 {
        let last = self.n_points - 1;
        if i >= last {
            self.hi
        } else {
            self.lo + i as f64 * ((self.hi - self.lo) / last as f64)
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.value(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub base: ModelParams,
    pub parameter: Param,
    pub range: GridAxis,
    pub s0: State,
    pub budget: Budget,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.range.validate(self.parameter)?;
        self.budget.validate()
    }
}

/// Orbit tail, period label and largest exponent at one parameter set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointResult {
    /// Global iteration index of `tail[0]`.
    pub first_index: usize,
    pub tail: Vec<State>,
    pub outcome: Outcome,
    /// `None` when the orbit escaped before a usable estimate.
    pub lambda1: Option<f64>,
}

pub fn evaluate_point(p: &ModelParams, s0: State, budget: &Budget) -> PointResult {
    let total = budget.n_transient + budget.n_record;
    let orbit = iterate_with(p, s0, total, budget.n_transient, budget.period)
        .expect("n_record > 0 is checked by Budget::validate");
    let lambda1 = lyapunov_spectrum_with(
        p,
        s0,
        budget.n_transient,
        budget.n_lyap,
        SeriesMode::FinalOnly,
    )
    .ok()
    .map(|r| r.lambda1);
    PointResult {
        first_index: orbit.first_index(),
        tail: orbit.tail,
        outcome: orbit.outcome,
        lambda1,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub value: f64,
    #[serde(flatten)]
    pub result: PointResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub parameter: Param,
    pub points: Vec<SweepPoint>,
}

/// One-parameter sweep using the default worker pool.
pub fn bifurcation_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    bifurcation_sweep_with(spec, Workers::Auto)
}

pub fn bifurcation_sweep_with(spec: &SweepSpec, workers: Workers) -> Result<SweepResult> {
    spec.validate()?;
    let params = spec
        .range
        .values()
        .into_iter()
        .map(|v| spec.base.with(spec.parameter, v).map(|p| (v, p)))
        .collect::<Result<Vec<_>>>()?;
    let points = map_indexed(params.len(), workers, |i| {
        let (value, p) = params[i];
        SweepPoint {
            value,
            result: evaluate_point(&p, spec.s0, &spec.budget),
        }
    });
    Ok(SweepResult {
        parameter: spec.parameter,
        points,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChaosGridSpec {
    pub base: ModelParams,
    pub c2: GridAxis,
    pub c3: GridAxis,
    pub r2_values: Vec<f64>,
    pub s0: State,
    pub budget: Budget,
}

impl ChaosGridSpec {
    pub fn validate(&self) -> Result<()> {
        self.c2.validate(Param::C2)?;
        self.c3.validate(Param::C3)?;
        if self.r2_values.is_empty() {
            return Err(Error::InvalidSpec(
                "chaos grid needs at least one r2 value".into(),
            ));
        }
        for &r2 in &self.r2_values {
            Param::R2.validate(r2)?;
        }
        self.budget.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChaosCell {
    pub c2: f64,
    pub c3: f64,
    pub r2: f64,
    pub lambda1: Option<f64>,
    pub outcome: Outcome,
}

impl ChaosCell {
    /// `period-k`, `aperiodic` or `escaped`.
    pub fn label(&self) -> String {
        match self.outcome {
            Outcome::Settled(k) => format!("period-{k}"),
            other => other.label(),
        }
    }
}

/// Cells ordered by r2 value, then c2 index, then c3 index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChaosGrid {
    pub c2_values: Vec<f64>,
    pub c3_values: Vec<f64>,
    pub r2_values: Vec<f64>,
    pub cells: Vec<ChaosCell>,
}

impl ChaosGrid {
    pub fn cell(&self, r2_index: usize, c2_index: usize, c3_index: usize) -> &ChaosCell {
        let n2 = self.c2_values.len();
        let n3 = self.c3_values.len();
        &self.cells[(r2_index * n2 + c2_index) * n3 + c3_index]
    }

    /// Cells sharing one r2 value.
    pub fn slice(&self, r2_index: usize) -> &[ChaosCell] {
        let n = self.c2_values.len() * self.c3_values.len();
        &self.cells[r2_index * n..(r2_index + 1) * n]
    }
}

pub fn chaos_grid(spec: &ChaosGridSpec) -> Result<ChaosGrid> {
    chaos_grid_with(spec, Workers::Auto)
}

pub fn chaos_grid_with(spec: &ChaosGridSpec, workers: Workers) -> Result<ChaosGrid> {
    spec.validate()?;
    let c2_values = spec.c2.values();
    let c3_values = spec.c3.values();
    let mut params = Vec::with_capacity(spec.r2_values.len() * c2_values.len() * c3_values.len());
    for &r2 in &spec.r2_values {
        for &c2 in &c2_values {
            for &c3 in &c3_values {
                let p =
                    ModelParams::new(spec.base.r1(), r2, spec.base.c1(), c2, c3, spec.base.c4())?;
                params.push(p);
            }
        }
    }
    let budget = spec.budget;
    let cells = map_indexed(params.len(), workers, |i| {
        let p = &params[i];
        let point = evaluate_point(p, spec.s0, &budget);
        ChaosCell {
            c2: p.c2(),
            c3: p.c3(),
            r2: p.r2(),
            lambda1: point.lambda1,
            outcome: point.outcome,
        }
    });
    Ok(ChaosGrid {
        c2_values,
        c3_values,
        r2_values: spec.r2_values.clone(),
        cells,
    })
}
