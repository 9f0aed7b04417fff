//! Lyapunov spectrum from products of Jacobians along an orbit.
//!
//! An orthonormal frame (initially the coordinate axes) is pushed through
//! `J(x̄_i)` and re-orthonormalised by Gram–Schmidt after every step; the
//! logarithms of the diagonal stretch factors are accumulated per frame axis.
//! The exponents are those accumulated logs divided by the step count.
//!
//! With a diagonal Jacobian (the decoupled case) the frame never rotates, so
//! each axis exponent is exactly the derivative-log average of the matching
//! one-dimensional map. The reported pair is sorted, `lambda1 ≥ lambda2`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{jacobian, ModelParams, State};
use crate::orbit::advance;

/// Per-step log stretch floor. A zero stretch (super-stable direction)
/// contributes this value instead of `-∞`.
pub const LOG_FLOOR: f64 = -50.0;

/// Minimum number of post-transient steps for a usable estimate.
pub const MIN_STEPS: usize = 100;

pub const DEFAULT_TRANSIENT: usize = 400;
pub const DEFAULT_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesPoint {
    pub n: usize,
    pub lambda1: f64,
    pub lambda2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LyapunovResult {
    pub lambda1: f64,
    pub lambda2: f64,
    /// Unsorted exponents along the initial `x` and `y` frame axes.
    pub frame_exponents: [f64; 2],
    /// Running estimates; the last entry equals `(lambda1, lambda2)`.
    pub series: Vec<SeriesPoint>,
    pub n_used: usize,
    /// The base orbit escaped before `n_iter` steps; the estimate uses `n_used`.
    pub escaped: bool,
}

/// How much of the running estimate to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesMode {
    /// Every `k`-th step plus the final one.
    Every(usize),
    /// Only the final estimate.
    FinalOnly,
}

/// Full spectrum with the running series kept at every step.
pub fn lyapunov_spectrum(
    p: &ModelParams,
    s0: State,
    n_transient: usize,
    n_iter: usize,
) -> Result<LyapunovResult> {
    lyapunov_spectrum_with(p, s0, n_transient, n_iter, SeriesMode::Every(1))
}

pub fn lyapunov_spectrum_with(
    p: &ModelParams,
    s0: State,
    n_transient: usize,
    n_iter: usize,
    mode: SeriesMode,
) -> Result<LyapunovResult> {
    let too_early = |completed| Error::EscapedTooEarly {
        completed,
        required: MIN_STEPS,
    };
    if n_iter < MIN_STEPS {
        return Err(Error::InvalidSpec(format!(
            "n_iter ({n_iter}) must be at least {MIN_STEPS}"
        )));
    }

    let mut s = s0;
    for _ in 0..n_transient {
        s = advance(p, s).ok_or_else(|| too_early(0))?;
    }

    let stride = match mode {
        SeriesMode::Every(k) => Some(k.max(1)),
        SeriesMode::FinalOnly => None,
    };
    let mut series = Vec::with_capacity(stride.map_or(1, |k| n_iter / k + 1));
    let mut frame = [[1.0, 0.0], [0.0, 1.0]];
    let mut sums = [0.0f64; 2];
    let mut n_used = 0;
    let mut escaped = false;

    for i in 0..n_iter {
        if i > 0 {
            match advance(p, s) {
                Some(next) => s = next,
                None => {
                    escaped = true;
                    break;
                }
            }
        }
        let Ok(j) = jacobian(p, s) else {
            escaped = true;
            break;
        };
        let (next, stretch) = reorthonormalize(frame, j.apply(frame[0]), j.apply(frame[1]));
        frame = next;
        sums[0] += log_stretch(stretch[0]);
        sums[1] += log_stretch(stretch[1]);
        n_used = i + 1;
        if let Some(k) = stride {
            if n_used % k == 0 {
                series.push(estimate(sums, n_used));
            }
        }
    }

    if n_used < MIN_STEPS {
        return Err(too_early(n_used));
    }
    let last = estimate(sums, n_used);
    if series.last().map(|pt| pt.n) != Some(n_used) {
        series.push(last);
    }
    let n = n_used as f64;
    Ok(LyapunovResult {
        lambda1: last.lambda1,
        lambda2: last.lambda2,
        frame_exponents: [sums[0] / n, sums[1] / n],
        series,
        n_used,
        escaped,
    })
}

#[inline]
fn log_stretch(r: f64) -> f64 {
    if r > 0.0 {
        r.ln().max(LOG_FLOOR)
    } else {
        LOG_FLOOR
    }
}

#[inline]
fn estimate(sums: [f64; 2], n: usize) -> SeriesPoint {
    let a = sums[0] / n as f64;
    let b = sums[1] / n as f64;
    SeriesPoint {
        n,
        lambda1: a.max(b),
        lambda2: a.min(b),
    }
}

#[inline]
fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

/// Gram–Schmidt on the images `u = J·q1`, `w = J·q2` of the previous frame.
/// Returns the new frame and the diagonal of the triangular factor. A
/// collapsed direction keeps its previous orientation so the frame stays
/// orthonormal.
#[inline]
fn reorthonormalize(prev: [[f64; 2]; 2], u: [f64; 2], w: [f64; 2]) -> ([[f64; 2]; 2], [f64; 2]) {
    let r11 = norm(u);
    let q1 = if r11 > 0.0 {
        [u[0] / r11, u[1] / r11]
    } else {
        prev[0]
    };
    let dot = q1[0] * w[0] + q1[1] * w[1];
    let v = [w[0] - dot * q1[0], w[1] - dot * q1[1]];
    let r22 = norm(v);
    let q2 = if r22 > 0.0 {
        [v[0] / r22, v[1] / r22]
    } else {
        let perp = [-q1[1], q1[0]];
        if perp[0] * prev[1][0] + perp[1] * prev[1][1] < 0.0 {
            [-perp[0], -perp[1]]
        } else {
            perp
        }
    };
    ([q1, q2], [r11, r22])
}

/// Downsamples the stored running estimates to every `stride`-th entry,
/// always keeping the last one.
pub fn lambda_series(result: &LyapunovResult, stride: usize) -> Vec<SeriesPoint> {
    let stride = stride.max(1);
    let last = result.series.len().saturating_sub(1);
    result
        .series
        .iter()
        .enumerate()
        .filter(|&(i, _)| i % stride == stride - 1 || i == last)
        .map(|(_, pt)| *pt)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(r1: f64, r2: f64, c1: f64, c2: f64, c3: f64, c4: f64) -> ModelParams {
        ModelParams::new(r1, r2, c1, c2, c3, c4).unwrap()
    }

    fn st(x: f64, y: f64) -> State {
        State::new(x, y).unwrap()
    }

    /// Derivative-log average of the scalar map `u ↦ r·u·(1 − c·u)`.
    fn scalar_exponent(r: f64, c: f64, mut u: f64, n_transient: usize, n: usize) -> f64 {
        for _ in 0..n_transient {
            u = r * u * (1.0 - c * u);
        }
        let mut sum = 0.0;
        for _ in 0..n {
            sum += (r * (1.0 - 2.0 * c * u)).abs().ln();
            u = r * u * (1.0 - c * u);
        }
        sum / n as f64
    }

    #[test]
    fn full_logistic_is_ln_two() {
        let p = params(2.5, 4.0, 1.0, 0.0, 0.0, 1.0);
        let res = lyapunov_spectrum(&p, st(0.2, 0.3), 400, 100_000).unwrap();
        assert!((res.lambda1 - 2f64.ln()).abs() < 0.01, "{}", res.lambda1);
        let oracle = scalar_exponent(4.0, 1.0, 0.3, 400, 100_000);
        assert!((oracle - 2f64.ln()).abs() < 0.01);
        assert!(res.lambda1 >= res.lambda2);
        assert!(!res.escaped);
        assert_eq!(res.n_used, 100_000);
    }

    #[test]
    fn two_cycle_multiplier() {
        let r: f64 = 3.2;
        let root = ((r - 3.0) * (r + 1.0)).sqrt();
        let p1 = (r + 1.0 + root) / (2.0 * r);
        let p2 = (r + 1.0 - root) / (2.0 * r);
        let multiplier = (r * (1.0 - 2.0 * p1) * r * (1.0 - 2.0 * p2)).abs();
        assert_abs_diff_eq!(multiplier, 0.16, epsilon = 1e-12);

        let p = params(2.0, r, 1.0, 0.0, 0.0, 1.0);
        let res = lyapunov_spectrum(&p, st(0.2, 0.1), 400, 100_000).unwrap();
        assert!(
            (res.lambda1 - multiplier.ln() / 2.0).abs() < 0.01,
            "{}",
            res.lambda1
        );
    }

    #[test]
    fn superstable_direction_hits_floor() {
        // attracting fixed point (0.5, 0) with eigenvalues 0 and 0.5
        let p = params(2.0, 0.5, 1.0, 0.0, 0.0, 1.0);
        let res = lyapunov_spectrum(&p, st(0.5, 0.0), 0, 1000).unwrap();
        assert_abs_diff_eq!(res.lambda1, 0.5f64.ln(), epsilon = 1e-12);
        assert_eq!(res.lambda2, LOG_FLOOR);
        let first = res.series[0];
        for pt in &res.series {
            assert_abs_diff_eq!(pt.lambda1, first.lambda1, epsilon = 1e-12);
            assert_abs_diff_eq!(pt.lambda2, first.lambda2, epsilon = 1e-12);
        }
    }

    #[test]
    fn series_ends_at_result_and_downsamples() {
        let p = params(3.0, 3.9, 1.8, 0.6, 0.6, 2.5);
        let res = lyapunov_spectrum(&p, st(0.2, 0.1), 400, 1234).unwrap();
        assert_eq!(res.series.len(), 1234);
        let last = *res.series.last().unwrap();
        assert_eq!(
            (last.n, last.lambda1, last.lambda2),
            (1234, res.lambda1, res.lambda2)
        );
        assert!(res.series.windows(2).all(|w| w[0].n < w[1].n));

        let thin = lambda_series(&res, 100);
        assert_eq!(thin.len(), 13);
        assert_eq!(thin[0].n, 100);
        assert_eq!(thin.last().unwrap().n, 1234);

        let quick =
            lyapunov_spectrum_with(&p, st(0.2, 0.1), 400, 1234, SeriesMode::FinalOnly).unwrap();
        assert_eq!(quick.series.len(), 1);
        assert_eq!(quick.lambda1, res.lambda1);
    }

    #[test]
    fn escape_handling() {
        let p = params(4.0, 4.0, 1.0, 0.0, 0.0, 1.0);
        let err = lyapunov_spectrum(&p, st(1.5, 0.2), 0, 1000).unwrap_err();
        assert!(matches!(err, Error::EscapedTooEarly { .. }));
        assert!(lyapunov_spectrum(&p, st(0.2, 0.2), 0, 10).is_err());
    }

    #[test]
    fn frame_stays_orthonormal() {
        let prev = [[1.0, 0.0], [0.0, 1.0]];
        let (q, r) = reorthonormalize(prev, [0.0, 0.0], [0.0, 0.5]);
        assert_eq!(r, [0.0, 0.5]);
        assert_eq!(q, [[1.0, 0.0], [0.0, 1.0]]);
        let (q, r) = reorthonormalize(prev, [2.0, 1.0], [4.0, 2.0]);
        assert_eq!(r[1], 0.0);
        let dot = q[0][0] * q[1][0] + q[0][1] * q[1][1];
        assert_abs_diff_eq!(dot, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(norm(q[1]), 1.0, epsilon = 1e-15);
    }
}
