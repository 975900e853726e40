//! CSV and SVG writers for experiment records.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use anyhow::{ensure, Context, Result};

use crate::experiment::{Algorithm, ExperimentRecord};

/// Header of every CSV written by [`write_csv`].
pub const CSV_HEADER: &str = "algorithm,objective,n,budget_fraction,B,epsilon,delta,seed,trial,f_value,total_queries,adaptive_rounds_ast,adaptive_rounds_estimator,wall_ms";

pub fn write_csv_to<W: io::Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if records.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(records: &[ExperimentRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_csv_to(records, file).with_context(|| format!("writing {}", path.display()))
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<ExperimentRecord>> {
    let path = path.as_ref();
    let mut rd = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let header: Vec<String> = rd.headers()?.iter().map(str::to_owned).collect();
    ensure!(header.join(",") == CSV_HEADER, "{}: unexpected header", path.display());
    rd.deserialize()
        .map(|r| r.with_context(|| format!("reading {}", path.display())))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotAxis {
    /// Mean `f_value`.
    Value,
    /// Mean `adaptive_rounds_ast`.
    Rounds,
}

impl PlotAxis {
    fn label(self) -> &'static str {
        match self {
            PlotAxis::Value => "objective value",
            PlotAxis::Rounds => "adaptive rounds",
        }
    }

    fn of(self, r: &ExperimentRecord) -> f64 {
        match self {
            PlotAxis::Value => r.f_value,
            PlotAxis::Rounds => r.adaptive_rounds_ast as f64,
        }
    }
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 3] = ["#1f77b4", "#d62728", "#2ca02c"];

/// Per algorithm, `(budget_fraction, mean over trials)` sorted by fraction.
pub fn series(records: &[ExperimentRecord], axis: PlotAxis) -> BTreeMap<Algorithm, Vec<(f64, f64)>> {
    let mut sums: BTreeMap<Algorithm, BTreeMap<u64, (f64, usize)>> = BTreeMap::new();
    for r in records {
        // f64 bits order like the values for positive fractions.
        let slot = sums
            .entry(r.algorithm)
            .or_default()
            .entry(r.budget_fraction.to_bits())
            .or_insert((0.0, 0));
        slot.0 += axis.of(r);
        slot.1 += 1;
    }
    sums.into_iter()
        .map(|(a, pts)| {
            let pts = pts
                .into_iter()
                .map(|(x, (s, c))| (f64::from_bits(x), s / c as f64))
                .collect();
            (a, pts)
        })
        .collect()
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if hi - lo > 0.0 {
        (lo, hi)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
        (lo - pad, hi + pad)
    }
}

/// Line chart of `axis` against budget fraction, one series per algorithm.
/// A series with a single fraction is drawn as a point.
pub fn render_svg(records: &[ExperimentRecord], axis: PlotAxis) -> Result<String> {
    ensure!(!records.is_empty(), "nothing to plot");
    let data = series(records, axis);
    let (x0, x1) = span(data.values().flatten().map(|p| p.0));
    let (y0, y1) = span(data.values().flatten().map(|p| p.1).chain([0.0]));
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )?;
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    writeln!(
        s,
        r#"<path d="M{LEFT} {TOP} V{b} H{r}" fill="none" stroke="black"/>"#,
        b = TOP + ph,
        r = LEFT + pw
    )?;
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let (px, py) = (sx(xv), sy(yv));
        writeln!(
            s,
            r#"<line x1="{px:.2}" y1="{b}" x2="{px:.2}" y2="{b2}" stroke="black"/><text x="{px:.2}" y="{ty}" text-anchor="middle">{xv:.3}</text>"#,
            b = TOP + ph,
            b2 = TOP + ph + 5.0,
            ty = TOP + ph + 18.0
        )?;
        writeln!(
            s,
            r#"<line x1="{l2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/><text x="{tx}" y="{py:.2}" text-anchor="end" dominant-baseline="middle">{yv:.4}</text>"#,
            l2 = LEFT - 5.0,
            tx = LEFT - 8.0
        )?;
    }
    writeln!(
        s,
        r#"<text x="{cx}" y="{y}" text-anchor="middle">budget fraction</text>"#,
        cx = LEFT + pw / 2.0,
        y = HEIGHT - 10.0
    )?;
    writeln!(
        s,
        r#"<text transform="translate(16 {cy}) rotate(-90)" text-anchor="middle">{}</text>"#,
        axis.label(),
        cy = TOP + ph / 2.0
    )?;
    for (k, (algorithm, pts)) in data.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        if pts.len() > 1 {
            let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
            writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
                path.join(" ")
            )?;
        }
        for &(x, y) in pts {
            writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="{color}"/>"#, sx(x), sy(y))?;
        }
        let ly = TOP + 10.0 + 20.0 * k as f64;
        let lx = LEFT + pw + 15.0;
        writeln!(
            s,
            r#"<rect x="{lx}" y="{ry}" width="12" height="12" fill="{color}"/><text x="{tx}" y="{ly}" dominant-baseline="middle">{}</text>"#,
            algorithm.name(),
            ry = ly - 6.0,
            tx = lx + 18.0
        )?;
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn write_svg_plot(records: &[ExperimentRecord], path: impl AsRef<Path>, axis: PlotAxis) -> Result<()> {
    let path = path.as_ref();
    let svg = render_svg(records, axis)?;
    fs::write(path, svg).with_context(|| format!("writing {}", path.display()))
}
