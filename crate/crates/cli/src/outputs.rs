//! File writers: labels CSV, metrics JSON, SVG scatter. Every writer
//! formats numbers with fixed precision so identical inputs produce
//! byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use bacteria_farm::{Assignment, Dataset64, Error, GrowthMode, MetricsReport, Result};
use serde::Serialize;

/// Cluster colors cycle through this palette; noise is always gray.
pub const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac",
];
pub const NOISE_COLOR: &str = "#999999";

/// Labels CSV: header `index,label`, one row per point, noise spelled
/// out as the literal `noise`.
pub fn labels_csv(a: &Assignment) -> String {
    let mut out = String::from("index,label\n");
    for (i, label) in a.labels().iter().enumerate() {
        match label {
            Some(c) => writeln!(out, "{i},{c}").unwrap(),
            None => writeln!(out, "{i},noise").unwrap(),
        }
    }
    out
}

pub fn write_labels_csv(path: &Path, a: &Assignment) -> Result<()> {
    fs::write(path, labels_csv(a))?;
    Ok(())
}

#[derive(Serialize)]
struct MetricsJson<'a> {
    silhouette_mean: Option<f64>,
    calinski_harabasz: Option<f64>,
    n_clustered: usize,
    n_noise: usize,
    wall_time_ms: f64,
    growth_mode: Option<&'a str>,
}

/// Metrics JSON with a fixed key order; undefined metrics are `null`,
/// `growth_mode` is `null` for algorithms without a growth phase.
pub fn metrics_json(report: &MetricsReport, growth_mode: Option<GrowthMode>) -> String {
    let mode_str = growth_mode.map(|m| match m {
        GrowthMode::Sequential => "sequential",
        GrowthMode::RoundRobin => "round-robin",
    });
    let doc = MetricsJson {
        silhouette_mean: report.silhouette_mean,
        calinski_harabasz: report.calinski_harabasz,
        n_clustered: report.n_clustered,
        n_noise: report.n_noise,
        wall_time_ms: report.wall_time_ms,
        growth_mode: mode_str,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

pub fn write_metrics_json(
    path: &Path,
    report: &MetricsReport,
    growth_mode: Option<GrowthMode>,
) -> Result<()> {
    fs::write(path, metrics_json(report, growth_mode))?;
    Ok(())
}

/// SVG scatter of a 2-d dataset: one circle per point, cluster colors
/// from [`PALETTE`], noise in gray.
pub fn scatter_svg(ds: &Dataset64, a: &Assignment) -> Result<String> {
    if ds.dim() != 2 {
        return Err(Error::InvalidArgument(format!(
            "scatter plot needs a 2-d dataset, got {} dimensions",
            ds.dim()
        )));
    }
    const SIZE: f64 = 640.0;
    const MARGIN: f64 = 20.0;
    let inner = SIZE - 2.0 * MARGIN;
    let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..ds.n() {
        let c = ds.coords(i);
        min_x = min_x.min(c[0]);
        max_x = max_x.max(c[0]);
        min_y = min_y.min(c[1]);
        max_y = max_y.max(c[1]);
    }
    let span = |lo: f64, hi: f64| if hi > lo { hi - lo } else { 1.0 };
    let (sx, sy) = (span(min_x, max_x), span(min_y, max_y));

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(
        svg,
        r##"<rect width="{SIZE}" height="{SIZE}" fill="#ffffff"/>"##
    )
    .unwrap();
    for i in 0..ds.n() {
        let c = ds.coords(i);
        let px = MARGIN + (c[0] - min_x) / sx * inner;
        // svg y axis points down
        let py = SIZE - MARGIN - (c[1] - min_y) / sy * inner;
        let fill = match a.label(i) {
            Some(cluster) => PALETTE[cluster % PALETTE.len()],
            None => NOISE_COLOR,
        };
        writeln!(
            svg,
            r#"<circle cx="{px:.2}" cy="{py:.2}" r="3" fill="{fill}"/>"#
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn write_scatter_svg(path: &Path, ds: &Dataset64, a: &Assignment) -> Result<()> {
    fs::write(path, scatter_svg(ds, a)?)?;
    Ok(())
}
