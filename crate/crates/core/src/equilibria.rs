//! Closed-form fixed points of the map and their linear stability.
//!
//! Four families exist: the origin, one point on each axis (the other species
//! extinct) and the interior coexistence point. Classification comes from the
//! Jacobian eigenvalue moduli. For decoupled parameters (`c2 = c3 = 0`) the
//! report also evaluates the published tabulated stability conditions next to
//! the eigenvalue verdict so the two can be compared.

use num_complex::Complex64;
use serde::Serialize;

use crate::model::{eigenvalues_2x2, jacobian, step, ModelParams, State};

/// Half-width of the band around `|λ| = 1` treated as non-hyperbolic.
pub const HYPERBOLIC_TOL: f64 = 1e-9;

/// Relative threshold on `c1·c4 − c2·c3` below which the interior point is
/// considered degenerate.
pub const DEGENERATE_DET_TOL: f64 = 1e-12;

/// Tolerance on `‖T(x*) − x*‖∞ / (1 + ‖x*‖∞)`.
pub const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    Origin,
    /// `y* = 0`
    BoundaryX,
    /// `x* = 0`
    BoundaryY,
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Classification {
    Attracting,
    Repelling,
    Saddle,
    NonHyperbolic,
}

impl Classification {
    pub fn from_moduli(m1: f64, m2: f64) -> Self {
        let near_one = |m: f64| (m - 1.0).abs() <= HYPERBOLIC_TOL;
        if near_one(m1) || near_one(m2) {
            Classification::NonHyperbolic
        } else if m1 < 1.0 && m2 < 1.0 {
            Classification::Attracting
        } else if m1 > 1.0 && m2 > 1.0 {
            Classification::Repelling
        } else {
            Classification::Saddle
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPoint {
    pub location: State,
    pub family: Family,
    pub eigenvalues: [Complex64; 2],
    pub classification: Classification,
    /// False when a coordinate is negative (outside population space).
    pub feasible: bool,
}

impl FixedPoint {
    fn classify(p: &ModelParams, location: State, family: Family) -> Option<Self> {
        let j = jacobian(p, location).ok()?;
        let eigenvalues = eigenvalues_2x2(&j);
        Some(Self {
            location,
            family,
            eigenvalues,
            classification: Classification::from_moduli(
                eigenvalues[0].norm(),
                eigenvalues[1].norm(),
            ),
            feasible: location.x() >= 0.0 && location.y() >= 0.0,
        })
    }

    pub fn moduli(&self) -> [f64; 2] {
        [self.eigenvalues[0].norm(), self.eigenvalues[1].norm()]
    }

    /// `‖T(x*) − x*‖∞ / (1 + ‖x*‖∞)`.
    pub fn residual(&self, p: &ModelParams) -> f64 {
        match step(p, self.location) {
            Ok(next) => next.dist_inf(&self.location) / (1.0 + self.location.max_abs()),
            Err(_) => f64::INFINITY,
        }
    }
}

/// Why a fixed-point family is absent for a parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SkipReason {
    /// `c1·c4 − c2·c3` vanishes: the interior point is not isolated.
    DegenerateInterior,
    /// A growth rate is 0 or 1, or an intra-specific coefficient is 0.
    DivisionByZero,
    /// The closed form overflowed.
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointSet {
    pub points: Vec<FixedPoint>,
    pub skipped: Vec<(Family, SkipReason)>,
}

impl FixedPointSet {
    pub fn find(&self, family: Family) -> Option<&FixedPoint> {
        self.points.iter().find(|fp| fp.family == family)
    }

    pub fn feasible(&self) -> impl Iterator<Item = &FixedPoint> {
        self.points.iter().filter(|fp| fp.feasible)
    }
}

/// Enumerates every isolated fixed point in closed form.
pub fn fixed_points(p: &ModelParams) -> FixedPointSet {
    let mut set = FixedPointSet {
        points: Vec::with_capacity(4),
        skipped: Vec::new(),
    };
    let mut push = |family, loc: Result<(f64, f64), SkipReason>| {
        let point = loc.and_then(|(x, y)| {
            State::new(x, y)
                .ok()
                .and_then(|s| FixedPoint::classify(p, s, family))
                .ok_or(SkipReason::Overflow)
        });
        match point {
            Ok(fp) => set.points.push(fp),
            Err(reason) => set.skipped.push((family, reason)),
        }
    };

    push(Family::Origin, Ok((0.0, 0.0)));
    push(
        Family::BoundaryX,
        axis_root(p.r1(), p.c1()).map(|x| (x, 0.0)),
    );
    push(
        Family::BoundaryY,
        axis_root(p.r2(), p.c4()).map(|y| (0.0, y)),
    );
    push(Family::Interior, interior(p));
    set
}

/// Nonzero root of `r·(1 − c·u) = 1`, i.e. `(r − 1)/(c·r)`.
fn axis_root(r: f64, c: f64) -> Result<f64, SkipReason> {
    if r == 0.0 || r == 1.0 || c == 0.0 {
        return Err(SkipReason::DivisionByZero);
    }
    Ok((r - 1.0) / (c * r))
}

/// Solves `c1·x + c2·y = 1 − 1/r1`, `c3·x + c4·y = 1 − 1/r2`.
fn interior(p: &ModelParams) -> Result<(f64, f64), SkipReason> {
    if p.r1() == 0.0 || p.r2() == 0.0 {
        return Err(SkipReason::DivisionByZero);
    }
    let (a, b, c, d) = (p.c1(), p.c2(), p.c3(), p.c4());
    let det = a * d - b * c;
    let scale = 1f64.max((a * d).abs()).max((b * c).abs());
    if det.abs() <= DEGENERATE_DET_TOL * scale {
        return Err(SkipReason::DegenerateInterior);
    }
    let e = 1.0 - 1.0 / p.r1();
    let f = 1.0 - 1.0 / p.r2();
    let solve = |e: f64, f: f64| ((e * d - b * f) / det, (a * f - c * e) / det);
    let (mut x, mut y) = solve(e, f);
    // one round of iterative refinement on the linear residual
    let (dx, dy) = solve(e - (a * x + b * y), f - (c * x + d * y));
    x += dx;
    y += dy;
    if x.is_finite() && y.is_finite() {
        Ok((x, y))
    } else {
        Err(SkipReason::Overflow)
    }
}

/// The tabulated stability condition for the decoupled system, by family:
///
/// | family    | condition                              |
/// |-----------|----------------------------------------|
/// | Origin    | `0 < r1 < 1` and `0 < r2 < 1`          |
/// | BoundaryX | `r2 < 1` and `r1 − 2 < c1·r1`          |
/// | BoundaryY | `r1 < 1` and `r2 − 2 < c4·r2`          |
/// | Interior  | `r1 − 1 < c1·r1` and `r2 − 1 < c4·r2`  |
///
/// Returns `None` when the parameters are coupled, where no such table exists.
pub fn table_condition(p: &ModelParams, family: Family) -> Option<bool> {
    if !p.is_decoupled() {
        return None;
    }
    let (r1, r2, c1, c4) = (p.r1(), p.r2(), p.c1(), p.c4());
    Some(match family {
        Family::Origin => 0.0 < r1 && r1 < 1.0 && 0.0 < r2 && r2 < 1.0,
        Family::BoundaryX => r2 < 1.0 && r1 - 2.0 < c1 * r1,
        Family::BoundaryY => r1 < 1.0 && r2 - 2.0 < c4 * r2,
        Family::Interior => r1 - 1.0 < c1 * r1 && r2 - 1.0 < c4 * r2,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEntry {
    pub family: Family,
    pub x: f64,
    pub y: f64,
    pub eigenvalue1_re: f64,
    pub eigenvalue1_im: f64,
    pub eigenvalue2_re: f64,
    pub eigenvalue2_im: f64,
    pub modulus1: f64,
    pub modulus2: f64,
    pub classification: Classification,
    pub feasible: bool,
    /// Tabulated decoupled-case condition; absent for coupled parameters.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table_condition: Option<bool>,
    /// Whether the tabulated condition and `classification == Attracting` agree.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table_agrees: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedEntry {
    pub family: Family,
    pub reason: SkipReason,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub params: ModelParams,
    pub decoupled: bool,
    pub fixed_points: Vec<ReportEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<SkippedEntry>,
}

impl StabilityReport {
    pub fn entry(&self, family: Family) -> Option<&ReportEntry> {
        self.fixed_points.iter().find(|e| e.family == family)
    }
}

pub fn stability_report(p: &ModelParams) -> StabilityReport {
    let set = fixed_points(p);
    let fixed_points = set
        .points
        .iter()
        .map(|fp| {
            let [m1, m2] = fp.moduli();
            let table = table_condition(p, fp.family);
            ReportEntry {
                family: fp.family,
                x: fp.location.x(),
                y: fp.location.y(),
                eigenvalue1_re: fp.eigenvalues[0].re,
                eigenvalue1_im: fp.eigenvalues[0].im,
                eigenvalue2_re: fp.eigenvalues[1].re,
                eigenvalue2_im: fp.eigenvalues[1].im,
                modulus1: m1,
                modulus2: m2,
                classification: fp.classification,
                feasible: fp.feasible,
                table_condition: table,
                table_agrees: table.map(|t| t == (fp.classification == Classification::Attracting)),
            }
        })
        .collect();
    StabilityReport {
        params: *p,
        decoupled: p.is_decoupled(),
        fixed_points,
        skipped: set
            .skipped
            .iter()
            .map(|&(family, reason)| SkippedEntry { family, reason })
            .collect(),
    }
}
