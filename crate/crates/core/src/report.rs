//! CSV tables and a log-log SVG plot.
//!
//! Floats are written in shortest round-trip form, so output is byte-identical
//! for identical results.

use std::fmt::Write;

use crate::asymptotics::NormKind;
use crate::entropy::{CoveringTail, LaceyResult};
use crate::estimator::SmallDevCurve;
use crate::process::PathSample;

pub const CURVE_HEADER: &str = "eps,p_hat,ci_low,ci_high,n_samples,grid,norm";
pub const COVERING_HEADER: &str = "eps,n_cover,k_star,p_hat,ci_low,ci_high";
pub const TAIL_HEADER: &str = "u,p_hat,ci_low,ci_high";
pub const PATH_HEADER: &str = "t,x";

pub fn norm_name(kind: NormKind) -> &'static str {
    match kind {
        NormKind::SupAbs => "sup_abs",
        NormKind::Range => "range",
    }
}

pub fn curve_csv(curve: &SmallDevCurve) -> String {
    let mut s = format!("{CURVE_HEADER}\n");
    for i in 0..curve.len() {
        writeln!(
            s,
            "{},{},{},{},{},{},{}",
            curve.eps_grid[i],
            curve.p_hat[i],
            curve.ci_low[i],
            curve.ci_high[i],
            curve.n_samples,
            curve.grid_resolution,
            norm_name(curve.norm_kind)
        )
        .unwrap();
    }
    s
}

pub fn covering_csv(tail: &CoveringTail) -> String {
    let mut s = format!("{COVERING_HEADER}\n");
    for p in &tail.profiles {
        writeln!(
            s,
            "{},{},{},{},{},{}",
            p.eps, p.n_cover, p.k_star, p.p_hat, p.ci_low, p.ci_high
        )
        .unwrap();
    }
    s
}

pub fn tail_csv(res: &LaceyResult) -> String {
    let mut s = format!("{TAIL_HEADER}\n");
    for i in 0..res.u_grid.len() {
        writeln!(
            s,
            "{},{},{},{}",
            res.u_grid[i], res.p_hat[i], res.ci_low[i], res.ci_high[i]
        )
        .unwrap();
    }
    s
}

pub fn path_csv(path: &PathSample) -> String {
    let mut s = format!("{PATH_HEADER}\n");
    for (i, v) in path.values.iter().enumerate() {
        writeln!(s, "{},{}", path.grid.time(i), v).unwrap();
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesStyle {
    Markers,
    Line,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub style: SeriesStyle,
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: (f64, f64, f64, f64) = (70.0, 20.0, 30.0, 50.0); // left, right, top, bottom
const COLOURS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Log-log plot; points with nonpositive coordinates are dropped.
pub fn loglog_svg(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let pts = || {
        series
            .iter()
            .flat_map(|s| s.points.iter())
            .filter(|p| p.0 > 0.0 && p.1 > 0.0)
    };
    let bounds = |f: fn(&(f64, f64)) -> f64| {
        let (lo, hi) = pts()
            .map(|p| f(p).log10())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |a, v| (a.0.min(v), a.1.max(v)));
        if lo.is_finite() {
            (lo.floor(), hi.ceil().max(lo.floor() + 1.0))
        } else {
            (0.0, 1.0)
        }
    };
    let (x0, x1) = bounds(|p| p.0);
    let (y0, y1) = bounds(|p| p.1);
    let (ml, mr, mt, mb) = MARGIN;
    let px = |x: f64| ml + (x.log10() - x0) / (x1 - x0) * (W - ml - mr);
    let py = |y: f64| H - mb - (y.log10() - y0) / (y1 - y0) * (H - mt - mb);

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="18" text-anchor="middle" font-size="14">{}</text>"#,
        W / 2.0,
        escape(title)
    )
    .unwrap();
    for d in x0 as i32..=x1 as i32 {
        let x = px(10f64.powi(d));
        writeln!(
            s,
            r##"<line x1="{x:.1}" y1="{mt}" x2="{x:.1}" y2="{:.1}" stroke="#ddd"/>"##,
            H - mb
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">1e{d}</text>"#,
            H - mb + 16.0
        )
        .unwrap();
    }
    for d in y0 as i32..=y1 as i32 {
        let y = py(10f64.powi(d));
        writeln!(
            s,
            r##"<line x1="{ml}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/>"##,
            W - mr
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">1e{d}</text>"#,
            ml - 6.0,
            y + 4.0
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<rect x="{ml}" y="{mt}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
        W - ml - mr,
        H - mt - mb
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        (ml + W - mr) / 2.0,
        H - 10.0,
        escape(x_label)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        (mt + H - mb) / 2.0,
        (mt + H - mb) / 2.0,
        escape(y_label)
    )
    .unwrap();

    for (k, ser) in series.iter().enumerate() {
        let c = COLOURS[k % COLOURS.len()];
        let valid: Vec<(f64, f64)> = ser.points.iter().copied().filter(|p| p.0 > 0.0 && p.1 > 0.0).collect();
        match ser.style {
            SeriesStyle::Markers => {
                for (x, y) in &valid {
                    writeln!(s, r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{c}"/>"#, px(*x), py(*y)).unwrap();
                }
            }
            SeriesStyle::Line => {
                let d: Vec<String> = valid
                    .iter()
                    .map(|(x, y)| format!("{:.1},{:.1}", px(*x), py(*y)))
                    .collect();
                writeln!(
                    s,
                    r#"<polyline points="{}" fill="none" stroke="{c}" stroke-width="1.5"/>"#,
                    d.join(" ")
                )
                .unwrap();
            }
        }
        let ly = mt + 16.0 + 16.0 * k as f64;
        writeln!(
            s,
            r#"<rect x="{:.1}" y="{:.1}" width="10" height="10" fill="{c}"/>"#,
            W - mr - 180.0,
            ly - 9.0
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.1}" y="{ly:.1}">{}</text>"#,
            W - mr - 165.0,
            escape(&ser.label)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
