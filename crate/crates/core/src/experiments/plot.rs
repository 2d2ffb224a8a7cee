//! Plot data: two-column text files and minimal SVG line charts.

use std::fmt::Write as _;

use serde::Serialize;

use super::ExperimentRecord;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl Curve {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Curve {
            name: name.into(),
            points,
        }
    }

    /// `x y` lines, preceded by a config comment when given.
    pub fn to_text(&self, config: Option<&serde_json::Value>) -> String {
        let mut out = String::new();
        if let Some(c) = config {
            out.push_str(&super::config_comment(c));
        }
        let _ = writeln!(out, "# curve: {}", self.name);
        for (x, y) in &self.points {
            let _ = writeln!(out, "{x} {y}");
        }
        out
    }
}

/// Mean of `metric` against `n`, one curve per experiment id. Records
/// without the metric are skipped.
pub fn curves_by_n(
    records: &[ExperimentRecord],
    metric: &str,
    value: impl Fn(&ExperimentRecord) -> Option<f64>,
) -> Vec<Curve> {
    use std::collections::BTreeMap;
    let mut acc: BTreeMap<&str, BTreeMap<usize, (f64, u64)>> = BTreeMap::new();
    for r in records {
        if let Some(v) = value(r) {
            let e = acc
                .entry(&r.experiment_id)
                .or_default()
                .entry(r.n)
                .or_insert((0.0, 0));
            e.0 += v;
            e.1 += 1;
        }
    }
    acc.into_iter()
        .map(|(id, by_n)| {
            Curve::new(
                format!("{id}:{metric}"),
                by_n.into_iter()
                    .map(|(n, (s, k))| (n as f64, s / k as f64))
                    .collect(),
            )
        })
        .collect()
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace("--", "- -")
}

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// A standalone SVG with one polyline per curve and the config embedded as
/// an XML comment.
pub fn svg_chart(title: &str, curves: &[Curve], config: Option<&serde_json::Value>) -> String {
    let (w, h, pad) = (640.0, 400.0, 50.0);
    let pts = curves.iter().flat_map(|c| c.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts.filter(|(x, y)| x.is_finite() && y.is_finite()) {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    if let Some(c) = config {
        let _ = writeln!(out, "<!-- config: {} -->", escape_xml(&c.to_string()));
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
        w / 2.0,
        escape_xml(title)
    );
    let _ = writeln!(
        out,
        r#"<polyline points="{pad},{pad} {pad},{} {},{}" fill="none" stroke="black"/>"#,
        h - pad,
        w - pad,
        h - pad
    );
    for (label, x, y, anchor) in [
        (format!("{x0:.3}"), pad, h - pad + 16.0, "start"),
        (format!("{x1:.3}"), w - pad, h - pad + 16.0, "end"),
        (format!("{y0:.3}"), pad - 4.0, h - pad, "end"),
        (format!("{y1:.3}"), pad - 4.0, pad + 4.0, "end"),
    ] {
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{y}" text-anchor="{anchor}" font-family="sans-serif" font-size="10">{label}</text>"#
        );
    }
    for (i, c) in curves.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> = c
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            points.join(" ")
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10" fill="{color}">{}</text>"#,
            w - pad + 4.0 - 120.0,
            pad + 14.0 * (i as f64 + 1.0),
            escape_xml(&c.name)
        );
    }
    out.push_str("</svg>\n");
    out
}
