//! Point forecast accuracy metrics and the per-model loss table.
//!
//! SMAPE is reported on the 0–200 percent scale. A pointwise SMAPE term
//! where both the actual and the forecast are zero is defined as 0.

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::EvalFrame;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("in-sample length {len} must exceed the seasonal period {period}")]
    InsampleTooShort { len: usize, period: usize },
    #[error("in-sample seasonal naive error is zero; MASE undefined")]
    ZeroDenominator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Smape,
    Mase,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Smape => "smape",
            Metric::Mase => "mase",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "smape" => Ok(Metric::Smape),
            "mase" => Ok(Metric::Mase),
            other => Err(format!("unknown metric `{other}`")),
        }
    }
}

fn check_pair(actuals: &[f64], forecasts: &[f64]) -> Result<(), MetricError> {
    if actuals.len() != forecasts.len() {
        return Err(MetricError::LengthMismatch {
            left: actuals.len(),
            right: forecasts.len(),
        });
    }
    if actuals.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    Ok(())
}

/// Single SMAPE term in percent.
#[inline]
pub fn smape_term(actual: f64, forecast: f64) -> f64 {
    let scale = actual.abs() + forecast.abs();
    if scale == 0.0 {
        return 0.0;
    }
    // |e| / ((|y| + |ŷ|) / 2), written so the ratio never rounds above 1.
    200.0 * ((forecast - actual).abs() / scale)
}

pub fn smape_points(actuals: &[f64], forecasts: &[f64]) -> Result<Vec<f64>, MetricError> {
    check_pair(actuals, forecasts)?;
    Ok(actuals.iter().zip(forecasts).map(|(&a, &f)| smape_term(a, f)).collect())
}

pub fn smape(actuals: &[f64], forecasts: &[f64]) -> Result<f64, MetricError> {
    let points = smape_points(actuals, forecasts)?;
    Ok(points.iter().sum::<f64>() / points.len() as f64)
}

/// Mean absolute in-sample error of the seasonal naive forecast at lag `m`.
pub fn mase_scale(insample: &[f64], m: usize) -> Result<f64, MetricError> {
    if m == 0 || insample.len() <= m {
        return Err(MetricError::InsampleTooShort {
            len: insample.len(),
            period: m,
        });
    }
    let sum: f64 = insample
        .iter()
        .skip(m)
        .zip(insample)
        .map(|(y, lagged)| (y - lagged).abs())
        .sum();
    let scale = sum / (insample.len() - m) as f64;
    if scale == 0.0 {
        return Err(MetricError::ZeroDenominator);
    }
    Ok(scale)
}

pub fn mase(test_actuals: &[f64], forecasts: &[f64], insample: &[f64], m: usize) -> Result<f64, MetricError> {
    check_pair(test_actuals, forecasts)?;
    let scale = mase_scale(insample, m)?;
    let mae = test_actuals
        .iter()
        .zip(forecasts)
        .map(|(a, f)| (a - f).abs())
        .sum::<f64>()
        / test_actuals.len() as f64;
    Ok(mae / scale)
}

/// A (model, series) pair left out of the loss table.
#[derive(Debug, Clone, PartialEq)]
pub struct Exclusion {
    pub model: String,
    pub series: String,
    pub reason: MetricError,
}

/// Series-level and observation-level losses for every model.
#[derive(Debug, Clone, PartialEq)]
pub struct LossTable {
    metric: Metric,
    models: Vec<String>,
    series_losses: BTreeMap<(String, String), f64>,
    point_losses: BTreeMap<(String, String, usize), f64>,
    exclusions: Vec<Exclusion>,
}

impl LossTable {
    /// Assembles a table from raw entries. Keys are (model, series) and
    /// (model, series, step).
    pub fn from_parts(
        metric: Metric,
        series_losses: BTreeMap<(String, String), f64>,
        point_losses: BTreeMap<(String, String, usize), f64>,
        exclusions: Vec<Exclusion>,
    ) -> Self {
        let mut models: Vec<String> = series_losses.keys().map(|(m, _)| m.clone()).collect();
        models.extend(exclusions.iter().map(|e| e.model.clone()));
        models.sort();
        models.dedup();
        Self {
            metric,
            models,
            series_losses,
            point_losses,
            exclusions,
        }
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn models(&self) -> &[String] {
        &self.models
    }

    pub fn exclusions(&self) -> &[Exclusion] {
        &self.exclusions
    }

    pub fn series_loss(&self, model: &str, series: &str) -> Option<f64> {
        self.series_losses
            .get(&(model.to_string(), series.to_string()))
            .copied()
    }

    pub fn point_loss(&self, model: &str, series: &str, step: usize) -> Option<f64> {
        self.point_losses
            .get(&(model.to_string(), series.to_string(), step))
            .copied()
    }

    /// All ((model, series), loss) entries.
    pub fn series_entries(&self) -> impl Iterator<Item = (&str, &str, f64)> {
        self.series_losses
            .iter()
            .map(|((m, s), v)| (m.as_str(), s.as_str(), *v))
    }

    pub fn point_entries(&self) -> impl Iterator<Item = (&str, &str, usize, f64)> {
        self.point_losses
            .iter()
            .map(|((m, s, h), v)| (m.as_str(), s.as_str(), *h, *v))
    }

    /// Series losses of one model keyed by series id.
    pub fn series_losses_of(&self, model: &str) -> BTreeMap<&str, f64> {
        self.series_losses
            .range((model.to_string(), String::new())..)
            .take_while(|((m, _), _)| m == model)
            .map(|((_, s), v)| (s.as_str(), *v))
            .collect()
    }

    /// Point losses of one model keyed by (series, step).
    pub fn point_losses_of(&self, model: &str) -> BTreeMap<(&str, usize), f64> {
        self.point_losses
            .range((model.to_string(), String::new(), 0)..)
            .take_while(|((m, _, _), _)| m == model)
            .map(|((_, s, h), v)| ((s.as_str(), *h), *v))
            .collect()
    }

    pub fn series_count(&self) -> usize {
        self.series_losses.len()
    }

    /// Every loss multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> LossTable {
        let mut out = self.clone();
        out.series_losses.values_mut().for_each(|v| *v *= factor);
        out.point_losses.values_mut().for_each(|v| *v *= factor);
        out
    }

    /// CSV rows `model,unique_id,horizon,loss`; series-level rows leave
    /// `horizon` empty and precede the model's point rows.
    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["model", "unique_id", "horizon", "loss"])?;
        for model in &self.models {
            for (series, loss) in self.series_losses_of(model) {
                w.write_record([model.as_str(), series, "", &loss.to_string()])?;
            }
            for ((series, step), loss) in self.point_losses_of(model) {
                w.write_record([model.as_str(), series, &step.to_string(), &loss.to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

struct PairLosses {
    model: String,
    series: String,
    outcome: Result<(f64, Vec<f64>), MetricError>,
}

fn pair_losses(frame: &EvalFrame, series: &str, model: &str, metric: Metric) -> PairLosses {
    let (actuals, forecasts): (Vec<f64>, Vec<f64>) =
        frame.pair_rows(series, model).map(|r| (r.actual, r.forecast)).unzip();
    let outcome = match metric {
        Metric::Smape => smape_points(&actuals, &forecasts).map(|points| {
            let mean = points.iter().sum::<f64>() / points.len() as f64;
            (mean, points)
        }),
        Metric::Mase => {
            let history = frame.training().get(series).expect("frame carries training data");
            let m = history.frequency().season_length();
            mase(&actuals, &forecasts, history.values(), m).and_then(|value| {
                let scale = mase_scale(history.values(), m)?;
                let points = actuals
                    .iter()
                    .zip(&forecasts)
                    .map(|(a, f)| (a - f).abs() / scale)
                    .collect();
                Ok((value, points))
            })
        }
    };
    PairLosses {
        model: model.to_string(),
        series: series.to_string(),
        outcome,
    }
}

/// Computes losses for every (model, series) pair of the frame. Pairs whose
/// metric is undefined are recorded as exclusions.
pub fn build_loss_table(frame: &EvalFrame, metric: Metric) -> LossTable {
    let pairs: Vec<(&str, &str)> = frame
        .series_ids()
        .iter()
        .flat_map(|s| frame.models().iter().map(move |m| (s.as_str(), m.as_str())))
        .collect();
    let computed: Vec<PairLosses> = pairs
        .par_iter()
        .map(|(s, m)| pair_losses(frame, s, m, metric))
        .collect();

    let mut series_losses = BTreeMap::new();
    let mut point_losses = BTreeMap::new();
    let mut exclusions = Vec::new();
    for pair in computed {
        match pair.outcome {
            Ok((value, points)) => {
                for (i, p) in points.into_iter().enumerate() {
                    point_losses.insert((pair.model.clone(), pair.series.clone(), i + 1), p);
                }
                series_losses.insert((pair.model, pair.series), value);
            }
            Err(reason) => exclusions.push(Exclusion {
                model: pair.model,
                series: pair.series,
                reason,
            }),
        }
    }
    exclusions.sort_by(|a, b| (&a.model, &a.series).cmp(&(&b.model, &b.series)));
    let mut table = LossTable::from_parts(metric, series_losses, point_losses, exclusions);
    for m in frame.models() {
        if !table.models.contains(m) {
            table.models.push(m.clone());
        }
    }
    table.models.sort();
    table
}
