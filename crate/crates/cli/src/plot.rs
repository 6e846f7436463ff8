//! Minimal standalone SVG line plots of CSV columns.

use crate::table::Table;
use crate::CliError;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub x: String,
    pub y: String,
    pub log_x: bool,
    pub log_y: bool,
}

impl PlotSpec {
    /// `y` against log ω on a linear axis.
    pub fn frequency(y: &str) -> Self {
        PlotSpec { x: "omega".into(), y: y.into(), log_x: true, log_y: false }
    }
}

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// Reads `csv_path` and writes the SVG to `out`. Nothing is written on error.
pub fn emit_plot(csv_path: &Path, spec: &PlotSpec, out: &Path) -> Result<(), CliError> {
    let svg = render_svg(&Table::read_csv(csv_path)?, spec)?;
    fs::write(out, svg).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Axis {
        let (mut lo, mut hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
        if log {
            lo = lo.log10().floor();
            hi = hi.log10().ceil();
            if hi <= lo {
                hi = lo + 1.0;
            }
        } else {
            if hi <= lo {
                let pad = if lo == 0.0 { 1.0 } else { 0.5 * lo.abs() };
                lo -= pad;
                hi += pad;
            }
            let step = nice_step(hi - lo);
            lo = (lo / step).floor() * step;
            hi = (hi / step).ceil() * step;
        }
        Axis { lo, hi, log }
    }

    fn frac(&self, v: f64) -> f64 {
        let t = if self.log { v.log10() } else { v };
        (t - self.lo) / (self.hi - self.lo)
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            let (a, b) = (self.lo as i32, self.hi as i32);
            let stride = ((b - a) as f64 / 8.0).ceil().max(1.0) as i32;
            (a..=b).step_by(stride as usize).map(|k| (10f64.powi(k), format!("1e{k}"))).collect()
        } else {
            let step = nice_step(self.hi - self.lo);
            let n = ((self.hi - self.lo) / step).round() as i64;
            (0..=n)
                .map(|i| {
                    let v = self.lo + i as f64 * step;
                    let label = if v.abs() < 1e-9 * step { "0".to_string() } else { format!("{v:.2e}") };
                    (v, label)
                })
                .collect()
        }
    }
}

fn nice_step(range: f64) -> f64 {
    let raw = range / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let m = raw / mag;
    let f = if m <= 1.0 {
        1.0
    } else if m <= 2.0 {
        2.0
    } else if m <= 5.0 {
        5.0
    } else {
        10.0
    };
    f * mag
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// One polyline per series (see [`Table::series`]). Non-finite values and,
/// on log axes, non-positive values are skipped.
pub fn render_svg(table: &Table, spec: &PlotSpec) -> Result<String, CliError> {
    let xi = table.column(&spec.x).ok_or_else(|| CliError::MissingColumn(spec.x.clone()))?;
    let yi = table.column(&spec.y).ok_or_else(|| CliError::MissingColumn(spec.y.clone()))?;
    if table.rows.is_empty() {
        return Err(CliError::EmptyInput);
    }
    let usable = |v: f64, log: bool| v.is_finite() && (!log || v > 0.0);
    let series: Vec<(String, Vec<(f64, f64)>)> = table
        .series(xi)
        .into_iter()
        .map(|(label, rows)| {
            let pts = rows
                .iter()
                .filter_map(|r| Some((r[xi].parse::<f64>().ok()?, r[yi].parse::<f64>().ok()?)))
                .filter(|&(x, y)| usable(x, spec.log_x) && usable(y, spec.log_y))
                .collect();
            (label, pts)
        })
        .collect();
    let all = || series.iter().flat_map(|(_, p)| p.iter());
    if all().next().is_none() {
        return Err(CliError::EmptyInput);
    }
    let ax = Axis::fit(all().map(|p| p.0), spec.log_x);
    let ay = Axis::fit(all().map(|p| p.1), spec.log_y);
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let px = |v: f64| LEFT + ax.frac(v) * pw;
    let py = |v: f64| TOP + (1.0 - ay.frac(v)) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for (v, label) in ax.ticks() {
        let x = px(v);
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, TOP + ph, TOP + ph + 5.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#, TOP + ph + 20.0);
    }
    for (v, label) in ay.ticks() {
        let y = py(v);
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/>"#, LEFT - 5.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#, LEFT - 8.0, y + 4.0);
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + 0.5 * pw,
        HEIGHT - 15.0,
        escape(&spec.x)
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        TOP + 0.5 * ph,
        TOP + 0.5 * ph,
        escape(&spec.y)
    );
    for (i, (label, pts)) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        if !pts.is_empty() {
            let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
                coords.join(" ")
            );
        }
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{colour}" stroke-width="2"/>"#, lx + 20.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly + 4.0, escape(label));
    }
    s.push_str("</svg>\n");
    Ok(s)
}
