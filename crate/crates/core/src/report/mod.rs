//! Run configuration and emission of tables, annotations, the radar chart
//! and the run manifest.

mod config;
mod svg;

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use config::{ActualsInput, ConfigError, RunConfig};
pub use svg::{model_polygons, rank_radius, render_radar_svg};

use crate::aggregation::{write_wdl_csv, Dimension, DimensionScores, RadarSummary, WdlRow};
use crate::baseline::{BaselineProfile, Hardness};
use crate::metrics::Metric;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("radar chart needs at least 3 axes, got {0}")]
    TooFewAxes(usize),
    #[error("radar chart needs at least one model")]
    NoModels,
    #[error("no ranks for axis `{0}`")]
    MissingAxis(Dimension),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

impl ReportError {
    pub(crate) fn io(path: &Path, source: io::Error) -> Self {
        ReportError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

fn csv_to_io(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::other(format!("{other:?}")),
    }
}

/// Renders CSV content into memory with `write`.
pub fn render_csv<F>(write: F) -> Vec<u8>
where
    F: FnOnce(&mut Vec<u8>) -> csv::Result<()>,
{
    let mut buf = Vec::new();
    write(&mut buf)
        .map_err(csv_to_io)
        .expect("writing to memory cannot fail");
    buf
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn file_digest(path: &Path) -> Result<String, ReportError> {
    let bytes = fs::read(path).map_err(|e| ReportError::io(path, e))?;
    Ok(sha256_hex(&bytes))
}

/// Writes files into an output directory and removes everything it wrote
/// unless [`commit`](Self::commit) is called.
#[derive(Debug)]
pub struct OutputWriter {
    dir: PathBuf,
    written: Vec<PathBuf>,
    created_dir: bool,
    committed: bool,
}

impl OutputWriter {
    pub fn new(dir: &Path) -> Result<Self, ReportError> {
        let created_dir = !dir.exists();
        fs::create_dir_all(dir).map_err(|e| ReportError::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
            created_dir,
            committed: false,
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf, ReportError> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| ReportError::io(&path, e))?;
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn commit(mut self) -> Vec<PathBuf> {
        self.committed = true;
        std::mem::take(&mut self.written)
    }
}

impl Drop for OutputWriter {
    fn drop(&mut self) {
        if self.committed {
            return;
        }
        for p in &self.written {
            let _ = fs::remove_file(p);
        }
        if self.created_dir {
            let _ = fs::remove_dir(&self.dir);
        }
    }
}

/// `unique_id,horizon,forecast,lower,upper,is_anomaly`
pub fn write_baseline_forecasts_csv<'a, W, I>(profiles: I, out: W) -> csv::Result<()>
where
    W: io::Write,
    I: IntoIterator<Item = &'a BaselineProfile>,
{
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["unique_id", "horizon", "forecast", "lower", "upper", "is_anomaly"])?;
    for p in profiles {
        let pi = &p.interval;
        for h in 0..pi.forecast.len() {
            w.write_record([
                p.series.clone(),
                (h + 1).to_string(),
                pi.forecast[h].to_string(),
                pi.lower[h].to_string(),
                pi.upper[h].to_string(),
                p.anomalies[h].to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `unique_id,baseline_smape,is_hard`
pub fn write_baseline_series_csv<'a, W, I>(hardness: I, out: W) -> csv::Result<()>
where
    W: io::Write,
    I: IntoIterator<Item = (&'a String, &'a Hardness)>,
{
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["unique_id", "baseline_smape", "is_hard"])?;
    for (id, h) in hardness {
        w.write_record([id.clone(), h.score.to_string(), h.is_hard.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Markdown report mirroring the score, rank and win/draw/loss tables.
/// SMAPE values are shown on a 0–1 scale.
pub fn render_markdown(metric: Metric, scores: &DimensionScores, summary: &RadarSummary, wdl: &[WdlRow]) -> String {
    let (divisor, scale_note) = match metric {
        Metric::Smape => (100.0, "SMAPE shown on a 0-1 scale (CSV files use percent, 0-200)"),
        Metric::Mase => (1.0, "MASE shown as computed"),
    };
    let mut md = String::new();
    writeln!(md, "# Forecast evaluation summary\n").unwrap();
    writeln!(md, "Metric: {metric}. {scale_note}.\n").unwrap();

    let models = summary.models();
    writeln!(md, "## Scores\n").unwrap();
    writeln!(md, "| dimension | n | {} |", models.join(" | ")).unwrap();
    writeln!(md, "|---|---|{}", "---|".repeat(models.len())).unwrap();
    for dim in scores.dimensions() {
        let n = models.first().and_then(|m| scores.get(dim, m)).map_or(0, |s| s.n);
        let cells: Vec<String> = models
            .iter()
            .map(|m| {
                scores
                    .get(dim, m)
                    .map_or_else(String::new, |s| format!("{:.4}", s.value / divisor))
            })
            .collect();
        writeln!(md, "| {dim} | {n} | {} |", cells.join(" | ")).unwrap();
    }

    writeln!(md, "\n## Ranks (1 = best, ties averaged)\n").unwrap();
    writeln!(md, "| dimension | {} |", models.join(" | ")).unwrap();
    writeln!(md, "|---|{}", "---|".repeat(models.len())).unwrap();
    for dim in summary.dimensions() {
        let cells: Vec<String> = models
            .iter()
            .map(|m| summary.rank(m, *dim).map_or_else(String::new, |r| r.to_string()))
            .collect();
        writeln!(md, "| {dim} | {} |", cells.join(" | ")).unwrap();
    }
    let means: Vec<String> = models
        .iter()
        .map(|m| summary.mean_rank(m).map_or_else(String::new, |r| format!("{r:.3}")))
        .collect();
    writeln!(md, "| mean rank | {} |", means.join(" | ")).unwrap();

    if !wdl.is_empty() {
        writeln!(md, "\n## Win/draw/loss (ROPE {}%)\n", wdl[0].rope).unwrap();
        writeln!(md, "| model_a | model_b | win | draw | loss |").unwrap();
        writeln!(md, "|---|---|---|---|---|").unwrap();
        for r in wdl {
            writeln!(
                md,
                "| {} | {} | {:.4} | {:.4} | {:.4} |",
                r.model_a, r.model_b, r.outcome.win, r.outcome.draw, r.outcome.loss
            )
            .unwrap();
        }
    }
    md
}

/// Writes score, rank and (when non-empty) win/draw/loss tables plus the
/// markdown summary. Returns the names of files written.
pub fn emit_tables(
    out: &mut OutputWriter,
    metric: Metric,
    scores: &DimensionScores,
    summary: &RadarSummary,
    wdl: &[WdlRow],
) -> Result<Vec<String>, ReportError> {
    let mut names = vec!["scores.csv".to_string(), "ranks.csv".to_string()];
    out.write("scores.csv", &render_csv(|b| scores.write_csv(b)))?;
    out.write("ranks.csv", &render_csv(|b| summary.write_csv(b)))?;
    if !wdl.is_empty() {
        out.write("win_draw_loss.csv", &render_csv(|b| write_wdl_csv(wdl, b)))?;
        names.push("win_draw_loss.csv".into());
    }
    out.write("summary.md", render_markdown(metric, scores, summary, wdl).as_bytes())?;
    names.push("summary.md".into());
    Ok(names)
}

pub fn emit_radar_svg(summary: &RadarSummary, axes: &[Dimension], path: &Path) -> Result<(), ReportError> {
    let svg = render_radar_svg(summary, axes)?;
    fs::write(path, svg).map_err(|e| ReportError::io(path, e))
}

#[derive(Debug, Clone, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

/// Machine-readable record of a run.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: RunConfig,
    pub metric_scale: &'static str,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub omitted: Vec<String>,
    pub counts: serde_json::Value,
    pub warnings: Vec<String>,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }
}

pub fn metric_scale(metric: Metric) -> &'static str {
    match metric {
        Metric::Smape => "smape_percent_0_200",
        Metric::Mase => "mase_ratio",
    }
}

/// Files produced by a successful run.
#[derive(Debug, Clone)]
pub struct ReportBundle {
    pub output_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub manifest: Manifest,
}

impl ReportBundle {
    pub fn file(&self, name: &str) -> Option<&Path> {
        self.files
            .iter()
            .find(|p| p.file_name().is_some_and(|n| n == name))
            .map(PathBuf::as_path)
    }
}
