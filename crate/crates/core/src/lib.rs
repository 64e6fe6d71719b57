//! Aspect-based evaluation of univariate time series forecasts.
//!
//! The crate annotates series and holdout observations with conditions
//! (stationarity, seasonality, anomalies, horizon position, hardness,
//! sampling frequency), scores forecasting models on each condition, and
//! summarizes the comparison as rank tables and a radar chart.
//!
//! The usual entry point is [`pipeline::run`] with a [`RunConfig`].

pub mod aggregation;
pub mod aspects;
pub mod baseline;
pub mod data;
pub mod demo;
pub mod metrics;
pub mod pipeline;
pub mod report;

pub use aggregation::{Dimension, DimensionScore, DimensionScores, RadarSummary, WinDrawLoss};
pub use aspects::{ConditionAnnotations, HorizonClass};
pub use baseline::BaselineProfile;
pub use data::{EvalFrame, ForecastSet, Frequency, SeriesCollection, TimeSeries};
pub use metrics::{LossTable, Metric};
pub use pipeline::{evaluate, run, run_annotate, Evaluation, RunError};
pub use report::{ReportBundle, RunConfig};
