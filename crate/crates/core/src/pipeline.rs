//! End-to-end evaluation: ingest, split, baseline, annotate, score, rank and
//! emit.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::aggregation::{
    build_dimension_scores, compare_against, rank_models, AggregationError, DimensionScores, RadarSummary, WdlRow,
};
use crate::aspects::{annotate, AspectConfig, AspectError, ConditionAnnotations};
use crate::baseline::{baseline_profile, hardness_scores, BaselineError, BaselineProfile, Hardness};
use crate::data::{
    align, load_actuals, load_forecasts, split_holdout, DataError, EvalFrame, ForecastSet, SeriesCollection,
};
use crate::metrics::{build_loss_table, LossTable};
use crate::report::{
    emit_tables, file_digest, metric_scale, render_csv, render_radar_svg, write_baseline_forecasts_csv,
    write_baseline_series_csv, ConfigError, FileDigest, Manifest, OutputWriter, ReportBundle, ReportError, RunConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Ingest,
    Split,
    Baseline,
    Annotate,
    Align,
    Aggregate,
    Rank,
    Emit,
    Setup,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Ingest => "ingest",
            Stage::Split => "split",
            Stage::Baseline => "baseline",
            Stage::Annotate => "annotate",
            Stage::Align => "align",
            Stage::Aggregate => "aggregate",
            Stage::Rank => "rank",
            Stage::Emit => "emit",
            Stage::Setup => "setup",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum StageError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
    #[error(transparent)]
    Aspect(#[from] AspectError),
    #[error(transparent)]
    Aggregation(#[from] AggregationError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error("{0}")]
    Other(String),
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("{stage} failed: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: StageError,
    },
}

impl RunError {
    /// True for errors raised before any computation started.
    pub fn is_validation(&self) -> bool {
        matches!(self, RunError::Config(_))
    }

    pub fn stage(&self) -> Option<Stage> {
        match self {
            RunError::Config(_) => None,
            RunError::Stage { stage, .. } => Some(*stage),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "error": {
                "kind": if self.is_validation() { "validation" } else { "runtime" },
                "stage": self.stage().map(|s| s.to_string()),
                "message": self.to_string(),
            }
        })
    }
}

fn at<E: Into<StageError>>(stage: Stage) -> impl FnOnce(E) -> RunError {
    move |e| RunError::Stage {
        stage,
        source: e.into(),
    }
}

/// Warnings collected during a run. Each message is kept once, in the order
/// it was first raised.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    warnings: Vec<String>,
}

impl Diagnostics {
    pub fn warn(&mut self, message: impl Into<String>) {
        let message = message.into();
        if !self.warnings.contains(&message) {
            self.warnings.push(message);
        }
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

/// Everything computed before emission.
#[derive(Debug, Clone)]
pub struct Annotated {
    pub collection: SeriesCollection,
    pub train: SeriesCollection,
    pub test: SeriesCollection,
    pub profiles: BTreeMap<String, BaselineProfile>,
    pub hardness: BTreeMap<String, Hardness>,
    pub annotations: ConditionAnnotations,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone)]
pub struct Evaluation {
    pub annotated: Annotated,
    pub forecasts: ForecastSet,
    pub frame: EvalFrame,
    pub losses: LossTable,
    pub scores: DimensionScores,
    pub summary: RadarSummary,
    pub wdl: Vec<WdlRow>,
    pub diagnostics: Diagnostics,
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, RunError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| at::<StageError>(Stage::Setup)(StageError::Other(e.to_string())))?;
    Ok(pool.install(f))
}

fn annotate_inner(config: &RunConfig) -> Result<Annotated, RunError> {
    let mut diagnostics = Diagnostics::default();
    let mut collection = SeriesCollection::new();
    for input in &config.actuals {
        let part = load_actuals(&input.path, input.frequency).map_err(at(Stage::Ingest))?;
        collection.merge(part).map_err(at(Stage::Ingest))?;
    }
    let (train, test) = split_holdout(&collection).map_err(at(Stage::Split))?;

    let pairs: Vec<_> = train.iter().filter_map(|s| Some((s, test.get(s.id())?))).collect();
    let fitted: Vec<(String, Result<BaselineProfile, BaselineError>)> = pairs
        .par_iter()
        .map(|(tr, te)| (tr.id().to_string(), baseline_profile(tr, te, config.anomaly_level)))
        .collect();
    let mut profiles = BTreeMap::new();
    for (id, result) in fitted {
        match result {
            Ok(p) => {
                if p.interval.degenerate {
                    diagnostics.warn(format!(
                        "series `{id}`: seasonal naive residuals are all equal; zero-width prediction interval"
                    ));
                }
                profiles.insert(id, p);
            }
            Err(e) => diagnostics.warn(format!("series `{id}`: no baseline profile: {e}")),
        }
    }
    let profile_list: Vec<BaselineProfile> = profiles.values().cloned().collect();
    let hardness = hardness_scores(&profile_list, config.hardness_percentile).map_err(at(Stage::Baseline))?;

    let aspect_config = AspectConfig {
        seasonality_threshold: config.seasonality_threshold,
        kpss_significance: config.kpss_significance,
    };
    let annotations = annotate(&train, &test, &profiles, &hardness, &aspect_config).map_err(at(Stage::Annotate))?;
    for w in annotations.warnings() {
        diagnostics.warn(w.clone());
    }
    Ok(Annotated {
        collection,
        train,
        test,
        profiles,
        hardness,
        annotations,
        diagnostics,
    })
}

/// Ingests actuals and annotates every series without reading forecasts.
pub fn annotate_collection(config: &RunConfig) -> Result<Annotated, RunError> {
    config.validate()?;
    with_pool(config.threads, || annotate_inner(config))?
}

fn evaluate_inner(config: &RunConfig) -> Result<Evaluation, RunError> {
    let annotated = annotate_inner(config)?;
    let mut diagnostics = annotated.diagnostics.clone();

    let mut forecasts = ForecastSet::default();
    for path in &config.forecasts {
        let part = load_forecasts(path, &annotated.collection).map_err(at(Stage::Ingest))?;
        forecasts.merge(part).map_err(at(Stage::Ingest))?;
    }

    let frame = align(&annotated.train, &annotated.test, &forecasts).map_err(at(Stage::Align))?;
    for (series, model) in frame.dropped_pairs() {
        diagnostics.warn(format!(
            "series `{series}` dropped for model `{model}`: not every model forecasts it"
        ));
    }

    let losses = build_loss_table(&frame, config.metric);
    for e in losses.exclusions() {
        diagnostics.warn(format!(
            "model `{}`, series `{}` excluded from aggregates: {}",
            e.model, e.series, e.reason
        ));
    }

    let scores = build_dimension_scores(&losses, &annotated.annotations, config.alpha).map_err(at(Stage::Aggregate))?;
    for w in &scores.warnings {
        diagnostics.warn(w.clone());
    }
    let summary = rank_models(&scores).map_err(at(Stage::Rank))?;

    let wdl = match &config.reference_model {
        Some(reference) => compare_against(&losses, reference, config.rope).map_err(at(Stage::Aggregate))?,
        None => Vec::new(),
    };

    Ok(Evaluation {
        annotated,
        forecasts,
        frame,
        losses,
        scores,
        summary,
        wdl,
        diagnostics,
    })
}

/// Runs every computation stage and returns the in-memory results.
pub fn evaluate(config: &RunConfig) -> Result<Evaluation, RunError> {
    config.validate_for_run()?;
    with_pool(config.threads, || evaluate_inner(config))?
}

/// Radar axes that have ranks; the rest are reported and skipped.
pub fn available_axes(
    config: &RunConfig,
    summary: &RadarSummary,
    diagnostics: &mut Diagnostics,
) -> Vec<crate::aggregation::Dimension> {
    config
        .radar_axes
        .iter()
        .copied()
        .filter(|axis| {
            let present = summary.dimensions().contains(axis);
            if !present {
                diagnostics.warn(format!("radar axis `{axis}` skipped: dimension has no score"));
            }
            present
        })
        .collect()
}

fn input_digests(config: &RunConfig, with_forecasts: bool) -> Result<Vec<FileDigest>, ReportError> {
    let mut paths: Vec<_> = config.actuals.iter().map(|a| a.path.clone()).collect();
    if with_forecasts {
        paths.extend(config.forecasts.iter().cloned());
    }
    paths
        .iter()
        .map(|p| {
            Ok(FileDigest {
                path: p.display().to_string(),
                sha256: file_digest(p)?,
            })
        })
        .collect()
}

fn output_digests(out: &OutputWriter) -> Result<Vec<FileDigest>, ReportError> {
    out.written()
        .iter()
        .map(|p| {
            Ok(FileDigest {
                path: p
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_default(),
                sha256: file_digest(p)?,
            })
        })
        .collect()
}

fn emit_annotations(out: &mut OutputWriter, a: &Annotated) -> Result<(), ReportError> {
    out.write(
        "annotations_series.csv",
        &render_csv(|b| a.annotations.write_series_csv(b)),
    )?;
    out.write(
        "annotations_observations.csv",
        &render_csv(|b| a.annotations.write_observation_csv(b)),
    )?;
    out.write(
        "baseline_forecasts.csv",
        &render_csv(|b| write_baseline_forecasts_csv(a.profiles.values(), b)),
    )?;
    out.write(
        "baseline_series.csv",
        &render_csv(|b| write_baseline_series_csv(a.hardness.iter(), b)),
    )?;
    Ok(())
}

fn finish(
    mut out: OutputWriter,
    command: &str,
    config: &RunConfig,
    inputs: Vec<FileDigest>,
    omitted: Vec<String>,
    counts: serde_json::Value,
    diagnostics: &Diagnostics,
) -> Result<ReportBundle, ReportError> {
    let manifest = Manifest {
        tool: "radar-eval",
        version: env!("CARGO_PKG_VERSION"),
        command: command.to_string(),
        config: config.clone(),
        metric_scale: metric_scale(config.metric),
        inputs,
        outputs: output_digests(&out)?,
        omitted,
        counts,
        warnings: diagnostics.warnings().to_vec(),
    };
    out.write("manifest.json", manifest.to_json().as_bytes())?;
    let output_dir = out.dir().to_path_buf();
    let files = out.commit();
    Ok(ReportBundle {
        output_dir,
        files,
        manifest,
    })
}

/// Full pipeline: evaluate and write every report file. On failure nothing
/// written by this run is left behind.
pub fn run(config: &RunConfig) -> Result<ReportBundle, RunError> {
    let mut ev = evaluate(config)?;
    let axes = available_axes(config, &ev.summary, &mut ev.diagnostics);

    let emit = || -> Result<ReportBundle, ReportError> {
        let inputs = input_digests(config, true)?;
        let mut out = OutputWriter::new(&config.output_dir)?;
        let mut omitted = Vec::new();
        emit_tables(&mut out, config.metric, &ev.scores, &ev.summary, &ev.wdl)?;
        if ev.wdl.is_empty() {
            omitted.push("win_draw_loss.csv: no reference model configured".to_string());
        }
        out.write("losses.csv", &render_csv(|b| ev.losses.write_csv(b)))?;
        emit_annotations(&mut out, &ev.annotated)?;
        out.write("radar.svg", render_radar_svg(&ev.summary, &axes)?.as_bytes())?;
        let counts = json!({
            "series": ev.annotated.collection.len(),
            "observations": ev.annotated.collection.total_observations(),
            "models": ev.summary.models(),
            "evaluated_series": ev.frame.series_ids().len(),
            "loss_entries": ev.losses.series_count(),
            "excluded_pairs": ev.losses.exclusions().len(),
            "annotations": ev.annotated.annotations.counts(),
            "radar_axes": axes.iter().map(|a| a.name()).collect::<Vec<_>>(),
        });
        finish(out, "run", config, inputs, omitted, counts, &ev.diagnostics)
    };
    emit().map_err(at(Stage::Emit))
}

/// Annotation-only pipeline: writes annotation and baseline tables.
pub fn run_annotate(config: &RunConfig) -> Result<ReportBundle, RunError> {
    let annotated = annotate_collection(config)?;
    let emit = || -> Result<ReportBundle, ReportError> {
        let inputs = input_digests(config, false)?;
        let mut out = OutputWriter::new(&config.output_dir)?;
        emit_annotations(&mut out, &annotated)?;
        let counts = json!({
            "series": annotated.collection.len(),
            "observations": annotated.collection.total_observations(),
            "annotations": annotated.annotations.counts(),
        });
        finish(
            out,
            "annotate",
            config,
            inputs,
            Vec::new(),
            counts,
            &annotated.diagnostics,
        )
    };
    emit().map_err(at(Stage::Emit))
}
