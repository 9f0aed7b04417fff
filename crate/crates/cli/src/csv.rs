//! CSV emitters. Reals use 17 significant digits (`{:.16e}`), which parse
//! back to the identical `f64`. Missing values are empty fields.

use std::fmt::Write;

use ecokmap_core::lyapunov::SeriesPoint;
use ecokmap_core::orbit::{OrbitRecord, Outcome};
use ecokmap_core::sweep::{ChaosGrid, SweepResult};

pub const ORBIT_HEADER: &str = "n,x,y";
pub const LYAPUNOV_HEADER: &str = "n,lambda1,lambda2";
pub const BIFURCATION_HEADER: &str = "param,n,x,y,period,lambda1";
pub const CHAOS_GRID_HEADER: &str = "c2,c3,r2,lambda1,label";

pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_real(v: Option<f64>) -> String {
    v.map(real).unwrap_or_default()
}

pub fn orbit_csv(record: &OrbitRecord) -> String {
    let mut out = String::with_capacity(64 * (record.tail.len() + 1));
    out.push_str(ORBIT_HEADER);
    out.push('\n');
    for (n, s) in record.indexed() {
        let _ = writeln!(out, "{n},{},{}", real(s.x()), real(s.y()));
    }
    out
}

pub fn lyapunov_csv(series: &[SeriesPoint]) -> String {
    let mut out = String::with_capacity(64 * (series.len() + 1));
    out.push_str(LYAPUNOV_HEADER);
    out.push('\n');
    for pt in series {
        let _ = writeln!(out, "{},{},{}", pt.n, real(pt.lambda1), real(pt.lambda2));
    }
    out
}

/// One row per recorded tail state. A point whose orbit escaped before the
/// recording window gets a single marker row with empty coordinates, `n` set
/// to the escape iteration and period `escaped`.
pub fn bifurcation_csv(result: &SweepResult) -> String {
    let mut out = String::new();
    out.push_str(BIFURCATION_HEADER);
    out.push('\n');
    for pt in &result.points {
        let r = &pt.result;
        let param = real(pt.value);
        let period = r.outcome.label();
        let lambda = opt_real(r.lambda1);
        if r.tail.is_empty() {
            let n = match r.outcome {
                Outcome::Escaped(at) => at,
                _ => r.first_index,
            };
            let _ = writeln!(out, "{param},{n},,,{period},{lambda}");
            continue;
        }
        for (i, s) in r.tail.iter().enumerate() {
            let _ = writeln!(
                out,
                "{param},{},{},{},{period},{lambda}",
                r.first_index + i,
                real(s.x()),
                real(s.y())
            );
        }
    }
    out
}

pub fn chaos_grid_csv(grid: &ChaosGrid) -> String {
    let mut out = String::new();
    out.push_str(CHAOS_GRID_HEADER);
    out.push('\n');
    for cell in &grid.cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            real(cell.c2),
            real(cell.c3),
            real(cell.r2),
            opt_real(cell.lambda1),
            cell.label()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(real(0.378), "3.7800000000000000e-1");
        assert_eq!(real(-2.0), "-2.0000000000000000e0");
        assert_eq!(real(0.0), "0.0000000000000000e0");
    }

    proptest! {
        #[test]
        fn reals_reparse_exactly(bits in any::<u64>()) {
            let v = f64::from_bits(bits);
            prop_assume!(v.is_finite());
            let back: f64 = real(v).parse().unwrap();
            prop_assert_eq!(back.to_bits(), v.to_bits());
        }
    }
}
