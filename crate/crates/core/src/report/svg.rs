//! Radar chart of model ranks. Rank 1 sits on the outer ring.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::aggregation::{Dimension, RadarSummary};

use super::ReportError;

const WIDTH: f64 = 720.0;
const CENTER_X: f64 = 300.0;
const CENTER_Y: f64 = 300.0;
const RADIUS: f64 = 220.0;
const LEGEND_X: f64 = 560.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn axis_angle(i: usize, n: usize) -> f64 {
    -PI / 2.0 + 2.0 * PI * i as f64 / n as f64
}

/// Distance from the center for `rank` among `models` models: rank 1 maps to
/// the full radius, rank `models` to `1 / models` of it.
pub fn rank_radius(rank: f64, models: usize) -> f64 {
    RADIUS * (models as f64 + 1.0 - rank) / models as f64
}

fn point(angle: f64, r: f64) -> (f64, f64) {
    (CENTER_X + r * angle.cos(), CENTER_Y + r * angle.sin())
}

/// Renders a standalone SVG with one closed polygon per model over `axes`.
pub fn render_radar_svg(summary: &RadarSummary, axes: &[Dimension]) -> Result<String, ReportError> {
    if axes.len() < 3 {
        return Err(ReportError::TooFewAxes(axes.len()));
    }
    let models = summary.models();
    if models.is_empty() {
        return Err(ReportError::NoModels);
    }
    for axis in axes {
        for m in models {
            if summary.rank(m, *axis).is_none() {
                return Err(ReportError::MissingAxis(*axis));
            }
        }
    }

    let n_axes = axes.len();
    let n_models = models.len();
    let height = (2.0 * CENTER_Y).max(60.0 + 22.0 * n_models as f64);
    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();

    // Rings: one per rank level, outermost is rank 1.
    writeln!(
        svg,
        r##"<g class="grid" fill="none" stroke="#d0d0d0" stroke-width="1">"##
    )
    .unwrap();
    for level in 1..=n_models {
        let r = rank_radius(level as f64, n_models);
        let pts: Vec<String> = (0..n_axes)
            .map(|i| {
                let (x, y) = point(axis_angle(i, n_axes), r);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        writeln!(
            svg,
            r#"<polygon class="ring" data-rank="{level}" points="{}"/>"#,
            pts.join(" ")
        )
        .unwrap();
    }
    for i in 0..n_axes {
        let (x, y) = point(axis_angle(i, n_axes), RADIUS);
        writeln!(
            svg,
            r#"<line class="axis" x1="{CENTER_X:.3}" y1="{CENTER_Y:.3}" x2="{x:.3}" y2="{y:.3}"/>"#
        )
        .unwrap();
    }
    writeln!(svg, "</g>").unwrap();

    writeln!(svg, r##"<g class="labels" fill="#333333" text-anchor="middle">"##).unwrap();
    for (i, axis) in axes.iter().enumerate() {
        let (x, y) = point(axis_angle(i, n_axes), RADIUS + 24.0);
        writeln!(svg, r#"<text x="{x:.3}" y="{y:.3}">{}</text>"#, escape(&axis.name())).unwrap();
    }
    writeln!(svg, "</g>").unwrap();

    for (k, model) in models.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let pts: Vec<String> = axes
            .iter()
            .enumerate()
            .map(|(i, axis)| {
                let rank = summary.rank(model, *axis).expect("checked above");
                let (x, y) = point(axis_angle(i, n_axes), rank_radius(rank, n_models));
                format!("{x:.3},{y:.3}")
            })
            .collect();
        writeln!(
            svg,
            r#"<polygon class="model" data-model="{}" points="{}" fill="{color}" fill-opacity="0.12" stroke="{color}" stroke-width="2"/>"#,
            escape(model),
            pts.join(" ")
        )
        .unwrap();
    }

    writeln!(svg, r#"<g class="legend">"#).unwrap();
    for (k, model) in models.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let y = 40.0 + 22.0 * k as f64;
        writeln!(
            svg,
            r#"<rect x="{LEGEND_X}" y="{:.1}" width="14" height="14" fill="{color}"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            y - 11.0,
            LEGEND_X + 20.0,
            y,
            escape(model)
        )
        .unwrap();
    }
    writeln!(svg, "</g>").unwrap();
    writeln!(svg, "</svg>").unwrap();
    Ok(svg)
}

/// Vertex lists of the model polygons in `svg`, keyed by model name.
pub fn model_polygons(svg: &str) -> Vec<(String, Vec<(f64, f64)>)> {
    let mut out = Vec::new();
    for line in svg.lines().filter(|l| l.starts_with(r#"<polygon class="model""#)) {
        let attr = |name: &str| -> Option<String> {
            let key = format!(r#"{name}=""#);
            let start = line.find(&key)? + key.len();
            let end = line[start..].find('"')? + start;
            Some(line[start..end].to_string())
        };
        let (Some(model), Some(points)) = (attr("data-model"), attr("points")) else {
            continue;
        };
        let vertices = points
            .split_whitespace()
            .filter_map(|p| {
                let (x, y) = p.split_once(',')?;
                Some((x.parse().ok()?, y.parse().ok()?))
            })
            .collect();
        out.push((model, vertices));
    }
    out
}
