//! CSV, SVG and manifest files for a run.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::Scenario;
use crate::error::CliError;
use crate::pipeline::{BreakdownInfo, RunResult, Table};

/// File name and contents.
pub type OutputFile = (String, Vec<u8>);

type PlotGroup<'a> = (String, Vec<(&'a str, Vec<f64>)>);

/// Shortest decimal that parses back to the same double. Plain notation for
/// moderate magnitudes, exponent notation otherwise.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn csv_bytes(table: &Table) -> Result<Vec<u8>, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|x| format_number(*x)))?;
    }
    w.into_inner()
        .map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Standalone SVG line plot of one or more series against `x`.
pub fn svg_plot(title: &str, x_label: &str, x: &[f64], series: &[(&str, Vec<f64>)]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const L: f64 = 70.0;
    const R: f64 = 20.0;
    const T: f64 = 30.0;
    const B: f64 = 50.0;
    const COLORS: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

    let finite = |v: &f64| v.is_finite();
    let ys: Vec<f64> = series
        .iter()
        .flat_map(|(_, v)| v.iter().copied())
        .filter(finite)
        .collect();
    let ymin = ys.iter().copied().fold(f64::INFINITY, f64::min);
    let ymax = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let log = ymin > 0.0 && ymax / ymin > 1e3;
    let map_y = |v: f64| if log { v.log10() } else { v };
    let (mut y0, mut y1) = (map_y(ymin), map_y(ymax));
    if !(y1 > y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let xmin = x.iter().copied().filter(finite).fold(f64::INFINITY, f64::min);
    let mut xmax = x.iter().copied().filter(finite).fold(f64::NEG_INFINITY, f64::max);
    if !(xmax > xmin) {
        xmax = xmin + 1.0;
    }
    let px = |v: f64| L + (v - xmin) / (xmax - xmin) * (W - L - R);
    let py = |v: f64| H - B - (map_y(v) - y0) / (y1 - y0) * (H - T - B);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="18" text-anchor="middle">{title}</text>"#, W / 2.0);
    let _ = writeln!(
        s,
        r#"<path d="M{L} {T} V{} H{}" fill="none" stroke="black"/>"#,
        H - B,
        W - R
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = xmin + f * (xmax - xmin);
        let yv = y0 + f * (y1 - y0);
        let ylab = if log { format!("1e{yv:.1}") } else { format!("{yv:.3}") };
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{}" text-anchor="middle">{xv:.3}</text>"#,
            px(xv),
            H - B + 18.0
        );
        let ypx = H - B - f * (H - T - B);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.1}" text-anchor="end">{ylab}</text>"#,
            L - 6.0,
            ypx + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{x_label}</text>"#,
        (L + W - R) / 2.0,
        H - 10.0
    );
    for (k, (name, v)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let mut pts = String::new();
        for (xi, yi) in x.iter().zip(v) {
            if xi.is_finite() && yi.is_finite() && (!log || *yi > 0.0) {
                let _ = write!(pts, "{:.2},{:.2} ", px(*xi), py(*yi));
            }
        }
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            pts.trim_end()
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{color}">{name}</text>"#,
            L + 10.0,
            T + 14.0 * (k as f64 + 1.0)
        );
    }
    s.push_str("</svg>\n");
    s
}

#[derive(Serialize)]
struct Integrator {
    method: &'static str,
    rtol: f64,
    atol: f64,
}

#[derive(Serialize)]
struct OutputEntry {
    file: String,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    scenario: &'a Scenario,
    library_version: &'static str,
    integrator: Integrator,
    critical_time: Option<f64>,
    t_end: Option<f64>,
    rows: usize,
    breakdown: Option<&'a BreakdownInfo>,
    outputs: Vec<OutputEntry>,
}

pub fn manifest_json(res: &RunResult, files: &[OutputFile]) -> Result<String, CliError> {
    let m = Manifest {
        scenario: &res.scenario,
        library_version: pseudoherm::VERSION,
        integrator: Integrator {
            method: res.method,
            rtol: res.scenario.rtol,
            atol: res.scenario.atol,
        },
        critical_time: res.critical_time,
        t_end: res.t_end,
        rows: res.table.rows.len(),
        breakdown: res.breakdown.as_ref(),
        outputs: files
            .iter()
            .map(|(name, bytes)| OutputEntry {
                file: name.clone(),
                sha256: sha256_hex(bytes),
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&m)? + "\n")
}

/// In-memory contents of every file of a run, keyed by file name.
pub fn render(res: &RunResult, table: &Table, svg: bool) -> Result<Vec<OutputFile>, CliError> {
    let name = &res.scenario.name;
    let mut files = vec![(format!("{name}.csv"), csv_bytes(table)?)];
    if svg {
        let (x_name, x_label) = if table.columns.iter().any(|c| c == "gamma_t") {
            ("gamma_t", "γt")
        } else {
            (table.columns[0].as_str(), table.columns[0].as_str())
        };
        let x = table.column(x_name).unwrap_or_default();
        let mut groups: Vec<PlotGroup> = Vec::new();
        for c in &table.columns {
            if c == "t" || c == x_name {
                continue;
            }
            let key = if c.starts_with("S_lin") {
                "S_lin".to_string()
            } else {
                c.clone()
            };
            let data = table.column(c).unwrap_or_default();
            match groups.iter_mut().find(|(k, _)| *k == key) {
                Some((_, g)) => g.push((c.as_str(), data)),
                None => groups.push((key, vec![(c.as_str(), data)])),
            }
        }
        for (key, series) in groups {
            let plot = svg_plot(&format!("{name}: {key}"), x_label, &x, &series);
            files.push((format!("{name}_{key}.svg"), plot.into_bytes()));
        }
    }
    let manifest = manifest_json(res, &files)?;
    files.push((format!("{name}.manifest.json"), manifest.into_bytes()));
    Ok(files)
}

pub fn write_files(dir: &Path, files: &[OutputFile]) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir)?;
    let mut out = Vec::with_capacity(files.len());
    for (name, bytes) in files {
        let p = dir.join(name);
        std::fs::write(&p, bytes)?;
        out.push(p);
    }
    Ok(out)
}
