//! Minimal SVG plots: line charts with optional error bars, log-log charts
//! and box plots. Output is deterministic for identical input.

use std::fmt::Write as _;

use crate::corpus::quantile;
use crate::strategies::StrategyKind;

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

/// Legend colors: likes red, comments blue, lifetime green, chrono purple,
/// random yellow, combined grey.
pub fn strategy_color(kind: StrategyKind) -> &'static str {
    match kind {
        StrategyKind::Likes => "#d62728",
        StrategyKind::Comments => "#1f77b4",
        StrategyKind::Lifetime => "#2ca02c",
        StrategyKind::Chrono => "#9467bd",
        StrategyKind::Random => "#e6b800",
        StrategyKind::Combined => "#7f7f7f",
    }
}

#[derive(Clone, Debug)]
pub struct Series {
    pub label: String,
    pub color: String,
    pub points: Vec<(f64, f64)>,
    /// Symmetric error bar half-width per point.
    pub error: Option<Vec<f64>>,
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0).max(1e-300) * (W - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        H - BOTTOM - (y - self.y0) / (self.y1 - self.y0).max(1e-300) * (H - TOP - BOTTOM)
    }
}

fn header(out: &mut String, title: &str) {
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\" font-size=\"12\">"
    )
    .unwrap();
    writeln!(out, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>").unwrap();
    writeln!(out, "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>", W / 2.0, escape(title)).unwrap();
}

fn axes(out: &mut String, f: &Frame, x_label: &str, y_label: &str, ticks_x: &[(f64, String)], ticks_y: &[(f64, String)]) {
    let (l, r, t, b) = (LEFT, W - RIGHT, TOP, H - BOTTOM);
    writeln!(out, "<path d=\"M{l} {t} L{l} {b} L{r} {b}\" fill=\"none\" stroke=\"black\"/>").unwrap();
    for (x, label) in ticks_x {
        let px = f.px(*x);
        writeln!(out, "<line x1=\"{px:.2}\" y1=\"{b}\" x2=\"{px:.2}\" y2=\"{}\" stroke=\"black\"/>", b + 5.0).unwrap();
        writeln!(out, "<text x=\"{px:.2}\" y=\"{}\" text-anchor=\"middle\">{label}</text>", b + 18.0).unwrap();
    }
    for (y, label) in ticks_y {
        let py = f.py(*y);
        writeln!(out, "<line x1=\"{}\" y1=\"{py:.2}\" x2=\"{l}\" y2=\"{py:.2}\" stroke=\"black\"/>", l - 5.0).unwrap();
        writeln!(out, "<text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\">{label}</text>", l - 8.0, py + 4.0).unwrap();
    }
    writeln!(out, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>", (l + r) / 2.0, H - 15.0, escape(x_label)).unwrap();
    writeln!(
        out,
        "<text x=\"18\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2})\">{}</text>",
        (t + b) / 2.0,
        (t + b) / 2.0,
        escape(y_label)
    )
    .unwrap();
}

fn legend(out: &mut String, entries: &[(&str, &str)]) {
    for (i, (label, color)) in entries.iter().enumerate() {
        let y = TOP + 10.0 + 18.0 * i as f64;
        let x = W - RIGHT + 15.0;
        writeln!(out, "<line x1=\"{x}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"{color}\" stroke-width=\"3\"/>", x + 20.0).unwrap();
        writeln!(out, "<text x=\"{}\" y=\"{}\">{}</text>", x + 26.0, y + 4.0, escape(label)).unwrap();
    }
}

fn polyline(out: &mut String, f: &Frame, s: &Series, map: &dyn Fn(f64, f64) -> Option<(f64, f64)>) {
    let pts: Vec<String> = s
        .points
        .iter()
        .filter_map(|&(x, y)| map(x, y))
        .map(|(x, y)| format!("{:.2},{:.2}", f.px(x), f.py(y)))
        .collect();
    writeln!(out, "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>", pts.join(" "), s.color).unwrap();
}

/// Linear axes, both in `[0, 1]` scaled to percent.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let f = Frame {
        x0: 0.0,
        x1: 1.0,
        y0: 0.0,
        y1: 1.0,
    };
    let ticks: Vec<(f64, String)> = (0..=5).map(|i| (i as f64 / 5.0, format!("{}%", i * 20))).collect();
    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, &f, x_label, y_label, &ticks, &ticks);
    for s in series {
        polyline(&mut out, &f, s, &|x, y| Some((x, y)));
        if let Some(err) = &s.error {
            for (&(x, y), &e) in s.points.iter().zip(err) {
                let (px, lo, hi) = (f.px(x), f.py((y - e).max(0.0)), f.py((y + e).min(1.0)));
                writeln!(out, "<line x1=\"{px:.2}\" y1=\"{lo:.2}\" x2=\"{px:.2}\" y2=\"{hi:.2}\" stroke=\"{}\"/>", s.color).unwrap();
            }
        }
    }
    let entries: Vec<(&str, &str)> = series.iter().map(|s| (s.label.as_str(), s.color.as_str())).collect();
    legend(&mut out, &entries);
    out.push_str("</svg>\n");
    out
}

/// Log-log axes; non-positive coordinates are dropped.
pub fn loglog_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let positive: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .filter(|&(x, y)| x > 0.0 && y > 0.0)
        .collect();
    let (mut xmax, mut ymin) = (10.0f64, 0.1f64);
    for &(x, y) in &positive {
        xmax = xmax.max(x);
        ymin = ymin.min(y);
    }
    let f = Frame {
        x0: 0.0,
        x1: xmax.log10().ceil(),
        y0: ymin.log10().floor(),
        y1: 0.0,
    };
    let ticks_x: Vec<(f64, String)> = (0..=f.x1 as i32).map(|e| (e as f64, format!("1e{e}"))).collect();
    let ticks_y: Vec<(f64, String)> = (f.y0 as i32..=0).map(|e| (e as f64, format!("1e{e}"))).collect();
    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, &f, x_label, y_label, &ticks_x, &ticks_y);
    for s in series {
        polyline(&mut out, &f, s, &|x, y| (x > 0.0 && y > 0.0).then(|| (x.log10(), y.log10())));
    }
    let entries: Vec<(&str, &str)> = series.iter().map(|s| (s.label.as_str(), s.color.as_str())).collect();
    legend(&mut out, &entries);
    out.push_str("</svg>\n");
    out
}

/// One box per group: quartile box, median line, whiskers at min and max.
pub fn box_plot(title: &str, y_label: &str, groups: &[(String, Vec<f64>)]) -> String {
    let f = Frame {
        x0: 0.0,
        x1: groups.len().max(1) as f64,
        y0: 0.0,
        y1: 1.0,
    };
    let ticks_x: Vec<(f64, String)> = groups
        .iter()
        .enumerate()
        .map(|(i, (label, _))| (i as f64 + 0.5, escape(label)))
        .collect();
    let ticks_y: Vec<(f64, String)> = (0..=5).map(|i| (i as f64 / 5.0, format!("{:.1}", i as f64 / 5.0))).collect();
    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, &f, "", y_label, &ticks_x, &ticks_y);
    for (i, (_, values)) in groups.iter().enumerate() {
        if values.is_empty() {
            continue;
        }
        let mut v = values.clone();
        v.sort_by(f64::total_cmp);
        let (min, q1, med, q3, max) = (
            v[0],
            quantile(&v, 0.25),
            quantile(&v, 0.5),
            quantile(&v, 0.75),
            v[v.len() - 1],
        );
        let (xl, xc, xr) = (f.px(i as f64 + 0.25), f.px(i as f64 + 0.5), f.px(i as f64 + 0.75));
        writeln!(out, "<line x1=\"{xc:.2}\" y1=\"{:.2}\" x2=\"{xc:.2}\" y2=\"{:.2}\" stroke=\"black\"/>", f.py(min), f.py(max)).unwrap();
        writeln!(
            out,
            "<rect x=\"{xl:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"#c6dbef\" stroke=\"black\"/>",
            f.py(q3),
            xr - xl,
            f.py(q1) - f.py(q3)
        )
        .unwrap();
        writeln!(out, "<line x1=\"{xl:.2}\" y1=\"{:.2}\" x2=\"{xr:.2}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"2\"/>", f.py(med), f.py(med)).unwrap();
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
