//! Self-contained SVG 1.1 plots: scatter (bifurcation, phase portrait), line
//! chart (running Lyapunov estimates) and heat map (chaos grid).
//!
//! Axis ranges auto-fit to the data with 5% margins. Every data point is one
//! element of class `pt` (one `<polyline>` vertex for line charts), so the
//! element count matches the CSV row count.

use std::fmt::Write;

use ecokmap_core::sweep::ChaosGrid;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 72.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 52.0;
const MARGIN: f64 = 0.05;
const TICKS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Marker {
    Point {
        x: f64,
        y: f64,
    },
    /// An orbit that escaped; drawn as a cross along the top edge at `x`.
    Escaped {
        x: f64,
    },
}

pub struct Series<'a> {
    pub name: &'a str,
    pub color: &'a str,
    pub points: Vec<(f64, f64)>,
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Data range padded by 5% on each side; a zero-width range is widened.
fn fit(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let span = hi - lo;
    if span <= 1e-12 * lo.abs().max(1.0) {
        let half = 0.05 * lo.abs().max(1.0);
        return (lo - half, hi + half);
    }
    (lo - MARGIN * span, hi + MARGIN * span)
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, v: f64) -> f64 {
        LEFT + (v - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, v: f64) -> f64 {
        HEIGHT - BOTTOM - (v - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }

    fn axes(&self, out: &mut String, title: &str, x_label: &str, y_label: &str) {
        let (x0, x1) = (LEFT, WIDTH - RIGHT);
        let (y0, y1) = (HEIGHT - BOTTOM, TOP);
        let _ = writeln!(
            out,
            r##"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#000000"/>"##,
            x1 - x0,
            y0 - y1
        );
        for i in 0..TICKS {
            let t = i as f64 / (TICKS - 1) as f64;
            let xv = self.x.0 + t * (self.x.1 - self.x.0);
            let yv = self.y.0 + t * (self.y.1 - self.y.0);
            let (tx, ty) = (self.px(xv), self.py(yv));
            let _ = writeln!(
                out,
                r##"<line x1="{tx:.2}" y1="{y0:.2}" x2="{tx:.2}" y2="{:.2}" stroke="#000000"/><text x="{tx:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"##,
                y0 + 5.0,
                y0 + 18.0,
                tick_label(xv)
            );
            let _ = writeln!(
                out,
                r##"<line x1="{:.2}" y1="{ty:.2}" x2="{x0:.2}" y2="{ty:.2}" stroke="#000000"/><text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"##,
                x0 - 5.0,
                x0 - 8.0,
                ty + 4.0,
                tick_label(yv)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="24" font-size="14" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            escape(title)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            HEIGHT - 12.0,
            escape(x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="16" y="{:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            escape(y_label)
        );
    }
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn header(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
    );
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(
        out,
        r##"<rect width="100%" height="100%" fill="#ffffff"/>"##
    );
}

pub fn scatter(title: &str, x_label: &str, y_label: &str, markers: &[Marker]) -> String {
    let frame = Frame {
        x: fit(markers.iter().map(|m| match *m {
            Marker::Point { x, .. } | Marker::Escaped { x } => x,
        })),
        y: fit(markers.iter().filter_map(|m| match *m {
            Marker::Point { y, .. } => Some(y),
            Marker::Escaped { .. } => None,
        })),
    };
    let mut out = String::with_capacity(80 * markers.len() + 4096);
    header(&mut out, WIDTH, HEIGHT);
    frame.axes(&mut out, title, x_label, y_label);
    let _ = writeln!(out, r##"<g fill="#1f4e9c" stroke="none">"##);
    for m in markers {
        match *m {
            Marker::Point { x, y } => {
                let _ = writeln!(
                    out,
                    r#"<circle class="pt" cx="{:.2}" cy="{:.2}" r="1.2"/>"#,
                    frame.px(x),
                    frame.py(y)
                );
            }
            Marker::Escaped { x } => {
                let (cx, cy) = (frame.px(x), TOP + 6.0);
                let _ = writeln!(
                    out,
                    r##"<path class="pt escaped" d="M{:.2} {:.2}L{:.2} {:.2}M{:.2} {:.2}L{:.2} {:.2}" stroke="#c0392b" fill="none"/>"##,
                    cx - 3.0,
                    cy - 3.0,
                    cx + 3.0,
                    cy + 3.0,
                    cx - 3.0,
                    cy + 3.0,
                    cx + 3.0,
                    cy - 3.0
                );
            }
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}

pub fn lines(title: &str, x_label: &str, y_label: &str, series: &[Series<'_>]) -> String {
    let frame = Frame {
        x: fit(series.iter().flat_map(|s| s.points.iter().map(|p| p.0))),
        y: fit(series.iter().flat_map(|s| s.points.iter().map(|p| p.1))),
    };
    let mut out = String::new();
    header(&mut out, WIDTH, HEIGHT);
    frame.axes(&mut out, title, x_label, y_label);
    for (k, s) in series.iter().enumerate() {
        out.push_str(r#"<polyline class="series" fill="none" stroke=""#);
        out.push_str(s.color);
        out.push_str(r#"" stroke-width="1.2" points=""#);
        for (i, &(x, y)) in s.points.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{:.2},{:.2}", frame.px(x), frame.py(y));
        }
        out.push_str("\"/>\n");
        let ly = TOP + 16.0 + 16.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}"/><text x="{:.2}" y="{:.2}" font-size="11">{}</text>"#,
            WIDTH - RIGHT - 110.0,
            WIDTH - RIGHT - 90.0,
            s.color,
            WIDTH - RIGHT - 85.0,
            ly + 4.0,
            escape(s.name)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Diverging palette: blue for negative, red for positive, saturating at
/// `|λ| = 0.5`; grey when no estimate exists.
fn heat_color(lambda: Option<f64>) -> String {
    match lambda {
        None => "#999999".into(),
        Some(l) => {
            let t = (l.abs() / 0.5).min(1.0);
            let fade = (255.0 * (1.0 - t)).round() as u8;
            if l > 0.0 {
                format!("#ff{fade:02x}{fade:02x}")
            } else {
                format!("#{fade:02x}{fade:02x}ff")
            }
        }
    }
}

/// One panel per r2 value: `c2` on the horizontal axis, `c3` vertical, the
/// dashed line marks `c2 = c3`.
pub fn heatmap(grid: &ChaosGrid) -> String {
    const PANEL: f64 = 300.0;
    const GAP: f64 = 70.0;
    let n_panels = grid.r2_values.len();
    let width = GAP + n_panels as f64 * (PANEL + GAP);
    let height = PANEL + 110.0;
    let n2 = grid.c2_values.len();
    let n3 = grid.c3_values.len();
    let cw = PANEL / n2 as f64;
    let ch = PANEL / n3 as f64;
    let span = |v: &[f64]| (v[0], v[v.len() - 1]);
    let (c2_lo, c2_hi) = span(&grid.c2_values);
    let (c3_lo, c3_hi) = span(&grid.c3_values);

    let mut out = String::new();
    header(&mut out, width, height);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="24" font-size="14" text-anchor="middle">largest Lyapunov exponent over (c2, c3)</text>"#,
        width / 2.0
    );
    for (k, &r2) in grid.r2_values.iter().enumerate() {
        let x0 = GAP + k as f64 * (PANEL + GAP);
        let y0 = 50.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">r2 = {r2}</text>"#,
            x0 + PANEL / 2.0,
            y0 - 6.0
        );
        let _ = writeln!(out, r#"<g stroke="none">"#);
        for i2 in 0..n2 {
            for i3 in 0..n3 {
                let cell = grid.cell(k, i2, i3);
                let _ = writeln!(
                    out,
                    r#"<rect class="pt" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                    x0 + i2 as f64 * cw,
                    y0 + PANEL - (i3 + 1) as f64 * ch,
                    cw,
                    ch,
                    heat_color(cell.lambda1)
                );
            }
        }
        out.push_str("</g>\n");
        // c2 = c3 reference line, clipped to the shared range
        let lo = c2_lo.max(c3_lo);
        let hi = c2_hi.min(c3_hi);
        if lo < hi {
            let fx = |c2: f64| x0 + (c2 - c2_lo) / (c2_hi - c2_lo) * PANEL;
            let fy = |c3: f64| y0 + PANEL - (c3 - c3_lo) / (c3_hi - c3_lo) * PANEL;
            let _ = writeln!(
                out,
                r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#000000" stroke-dasharray="4 3"/>"##,
                fx(lo),
                fy(lo),
                fx(hi),
                fy(hi)
            );
        }
        let _ = writeln!(
            out,
            r##"<rect x="{x0:.2}" y="{y0:.2}" width="{PANEL:.2}" height="{PANEL:.2}" fill="none" stroke="#000000"/>"##
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle">c2 {} .. {}</text>"#,
            x0 + PANEL / 2.0,
            y0 + PANEL + 18.0,
            tick_label(c2_lo),
            tick_label(c2_hi)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle" transform="rotate(-90 {:.2} {:.2})">c3 {} .. {}</text>"#,
            x0 - 10.0,
            y0 + PANEL / 2.0,
            x0 - 10.0,
            y0 + PANEL / 2.0,
            tick_label(c3_lo),
            tick_label(c3_hi)
        );
    }
    out.push_str("</svg>\n");
    out
}
