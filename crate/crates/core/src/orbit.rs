//! Orbit iteration, transient removal and period detection.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{step, ModelParams, State};

/// A component beyond this magnitude counts as escaped.
pub const ESCAPE_BOUND: f64 = 1e6;
pub const DEFAULT_MAX_PERIOD: usize = 64;
pub const DEFAULT_PERIOD_TOL: f64 = 1e-6;
/// Tail components below this magnitude are reported as extinct.
pub const EXTINCTION_LEVEL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    /// Tail repeats with this (smallest) period.
    Settled(usize),
    Aperiodic,
    /// The orbit left the bounded region at this iteration index.
    Escaped(usize),
}

impl Outcome {
    pub fn period(&self) -> Option<usize> {
        match *self {
            Outcome::Settled(k) => Some(k),
            _ => None,
        }
    }

    /// Short text label: the period number, `aperiodic` or `escaped`.
    pub fn label(&self) -> String {
        match *self {
            Outcome::Settled(k) => k.to_string(),
            Outcome::Aperiodic => "aperiodic".into(),
            Outcome::Escaped(_) => "escaped".into(),
        }
    }
}

/// Tolerances for [`detect_period`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodCriteria {
    pub max_period: usize,
    pub tol: f64,
}

impl Default for PeriodCriteria {
    fn default() -> Self {
        Self {
            max_period: DEFAULT_MAX_PERIOD,
            tol: DEFAULT_PERIOD_TOL,
        }
    }
}

/// A recorded orbit. `tail[i]` is the state after `first_index() + i`
/// applications of the map.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitRecord {
    pub initial: State,
    pub transient_len: usize,
    pub tail: Vec<State>,
    pub outcome: Outcome,
}

impl OrbitRecord {
    pub fn first_index(&self) -> usize {
        self.transient_len + 1
    }

    /// `(n, state)` pairs with global iteration indices.
    pub fn indexed(&self) -> impl Iterator<Item = (usize, State)> + '_ {
        let first = self.first_index();
        self.tail
            .iter()
            .enumerate()
            .map(move |(i, s)| (first + i, *s))
    }

    /// Which species stay below [`EXTINCTION_LEVEL`] over the whole tail.
    pub fn extinct(&self) -> (bool, bool) {
        if self.tail.is_empty() {
            return (false, false);
        }
        let gone = |f: fn(&State) -> f64| self.tail.iter().all(|s| f(s).abs() < EXTINCTION_LEVEL);
        (gone(State::x), gone(State::y))
    }

    pub fn mean(&self) -> Option<State> {
        if self.tail.is_empty() {
            return None;
        }
        let n = self.tail.len() as f64;
        let (sx, sy) = self
            .tail
            .iter()
            .fold((0.0, 0.0), |(a, b), s| (a + s.x(), b + s.y()));
        State::new(sx / n, sy / n).ok()
    }
}

/// Applies the map `n_total` times from `s0` and keeps the states after the
/// first `n_transient`, so `n_total − n_transient` states are recorded when
/// nothing escapes.
pub fn iterate(
    p: &ModelParams,
    s0: State,
    n_total: usize,
    n_transient: usize,
) -> Result<OrbitRecord> {
    iterate_with(p, s0, n_total, n_transient, PeriodCriteria::default())
}

pub fn iterate_with(
    p: &ModelParams,
    s0: State,
    n_total: usize,
    n_transient: usize,
    criteria: PeriodCriteria,
) -> Result<OrbitRecord> {
    if n_total <= n_transient {
        return Err(Error::InvalidSpec(format!(
            "n_total ({n_total}) must exceed n_transient ({n_transient})"
        )));
    }
    let mut tail = Vec::with_capacity(n_total - n_transient);
    let mut s = s0;
    let mut escaped = None;
    for n in 1..=n_total {
        match advance(p, s) {
            Some(next) => s = next,
            None => {
                escaped = Some(n);
                break;
            }
        }
        if n > n_transient {
            tail.push(s);
        }
    }
    let outcome = match escaped {
        Some(n) => Outcome::Escaped(n),
        None => detect_period(&tail, criteria.max_period, criteria.tol),
    };
    Ok(OrbitRecord {
        initial: s0,
        transient_len: n_transient,
        tail,
        outcome,
    })
}

/// One step, or `None` if the result is non-finite or beyond [`ESCAPE_BOUND`].
#[inline]
pub(crate) fn advance(p: &ModelParams, s: State) -> Option<State> {
    step(p, s).ok().filter(|n| n.max_abs() <= ESCAPE_BOUND)
}

/// Smallest `k ≤ max_period` with
/// `‖tail[i] − tail[i+k]‖∞ ≤ tol·(1 + ‖tail[i]‖∞)` for every `i`.
///
/// Only periods shorter than the tail are tested, so a single state is
/// reported `Aperiodic`.
pub fn detect_period(tail: &[State], max_period: usize, tol: f64) -> Outcome {
    let limit = max_period.min(tail.len().saturating_sub(1));
    (1..=limit)
        .find(|&k| {
            tail.iter()
                .zip(&tail[k..])
                .all(|(a, b)| a.dist_inf(b) <= tol * (1.0 + a.max_abs()))
        })
        .map_or(Outcome::Aperiodic, Outcome::Settled)
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

    #[test]
    fn logistic_two_converges() {
        let p = params(2.0, 0.5, 1.0, 0.0, 0.0, 1.0);
        let orbit = iterate(&p, st(0.45, 0.01), 2000, 1000).unwrap();
        assert_eq!(orbit.tail.len(), 1000);
        assert_eq!(orbit.first_index(), 1001);
        assert_eq!(orbit.outcome, Outcome::Settled(1));
        for s in &orbit.tail {
            assert_abs_diff_eq!(s.x(), 0.5, epsilon = 1e-12);
            assert_abs_diff_eq!(s.y(), 0.0, epsilon = 1e-12);
        }
        assert_eq!(orbit.extinct(), (false, true));
    }

    #[test]
    fn zero_growth_collapses() {
        let p = params(0.0, 0.0, 1.0, 0.3, 0.2, 1.0);
        let orbit = iterate(&p, st(0.7, 0.9), 20, 5).unwrap();
        assert!(orbit.tail.iter().all(|s| s.x() == 0.0 && s.y() == 0.0));
        assert_eq!(orbit.outcome, Outcome::Settled(1));
    }

    #[test]
    fn logistic_two_cycle() {
        let r: f64 = 3.2;
        let root = ((r - 3.0) * (r + 1.0)).sqrt();
        let hi = (r + 1.0 + root) / (2.0 * r);
        let lo = (r + 1.0 - root) / (2.0 * r);
        assert_abs_diff_eq!(hi, 0.799456, epsilon = 1e-6);
        assert_abs_diff_eq!(lo, 0.513044, epsilon = 1e-6);

        // r1 = 3 sits on the first period doubling, so x converges slowly
        let p = params(3.0, r, 1.0, 0.0, 0.0, 1.0);
        let orbit = iterate(&p, st(0.2, 0.1), 200_000, 199_900).unwrap();
        assert_eq!(orbit.outcome, Outcome::Settled(2));
        for pair in orbit.tail.windows(2) {
            let (a, b) = (pair[0].y(), pair[1].y());
            let (a, b) = if a > b { (a, b) } else { (b, a) };
            assert_abs_diff_eq!(a, hi, epsilon = 1e-9);
            assert_abs_diff_eq!(b, lo, epsilon = 1e-9);
        }
    }

    #[test]
    fn escape_truncates_record() {
        // outside [0, 1] the r = 4 logistic diverges
        let p = params(4.0, 4.0, 1.0, 0.0, 0.0, 1.0);
        let orbit = iterate(&p, st(1.5, 0.2), 100, 0).unwrap();
        let Outcome::Escaped(at) = orbit.outcome else {
            panic!("expected escape, got {:?}", orbit.outcome);
        };
        assert_eq!(orbit.tail.len(), at - 1);
        assert!(orbit.tail.iter().all(|s| s.max_abs() <= ESCAPE_BOUND));

        let late = iterate(&p, st(1.5, 0.2), 100, 50).unwrap();
        assert_eq!(late.outcome, Outcome::Escaped(at));
        assert!(late.tail.is_empty());
    }

    #[test]
    fn invalid_budget() {
        let p = params(2.0, 2.0, 1.0, 0.0, 0.0, 1.0);
        assert!(iterate(&p, st(0.1, 0.1), 10, 10).is_err());
    }

    #[test]
    fn period_detection_basics() {
        let a = st(0.3, 0.4);
        let b = st(0.8, 0.1);
        assert_eq!(detect_period(&[a; 10], 64, 1e-6), Outcome::Settled(1));
        let alt: Vec<_> = (0..10).map(|i| if i % 2 == 0 { a } else { b }).collect();
        assert_eq!(detect_period(&alt, 64, 1e-6), Outcome::Settled(2));
        assert_eq!(detect_period(&alt, 1, 1e-6), Outcome::Aperiodic);
        assert_eq!(detect_period(&[a], 64, 1e-6), Outcome::Aperiodic);
        let four: Vec<_> = (0..40)
            .map(|i| st([0.1, 0.5, 0.2, 0.9][i % 4], 0.0))
            .collect();
        assert_eq!(detect_period(&four, 64, 1e-6), Outcome::Settled(4));
    }

    #[test]
    fn full_logistic_is_aperiodic() {
        let p = params(3.0, 4.0, 1.0, 0.0, 0.0, 1.0);
        let orbit = iterate(&p, st(0.2, 0.1), 1100, 1000).unwrap();
        assert_eq!(orbit.outcome, Outcome::Aperiodic);
    }

    #[test]
    fn iteration_is_reproducible() {
        let p = params(3.0, 3.9, 1.8, 0.6, 0.6, 2.5);
        let a = iterate(&p, st(0.2, 0.1), 5000, 400).unwrap();
        let b = iterate(&p, st(0.2, 0.1), 5000, 400).unwrap();
        assert_eq!(a, b);
    }
}
