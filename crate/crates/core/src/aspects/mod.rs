//! Evaluation conditions attached to series and holdout observations.
//!
//! Series-level conditions (stationarity, seasonality, hardness, frequency)
//! are computed on training windows; observation-level conditions (anomaly,
//! horizon position) on holdout windows.

mod kpss;
mod seasonal;

use std::collections::BTreeMap;
use std::fmt;
use std::io;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use kpss::{
    bartlett_long_run_variance, kpss_critical_value, kpss_is_stationary, kpss_lags, kpss_statistic,
    KPSS_LEVEL_CRITICAL_VALUES, KPSS_MIN_LENGTH,
};
pub use seasonal::{centered_moving_average, classical_decomposition, is_seasonal, seasonal_strength, Decomposition};

use crate::baseline::{BaselineProfile, Hardness};
use crate::data::{Frequency, SeriesCollection};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AspectError {
    #[error("series length {len} is below the required {required}")]
    SeriesTooShort { len: usize, required: usize },
    #[error("unsupported KPSS significance level {0}; use 0.10, 0.05, 0.025 or 0.01")]
    UnsupportedSignificance(f64),
    #[error("seasonal period must be at least 2, got {0}")]
    InvalidPeriod(usize),
}

/// Thresholds used while annotating.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AspectConfig {
    pub seasonality_threshold: f64,
    pub kpss_significance: f64,
}

impl Default for AspectConfig {
    fn default() -> Self {
        Self {
            seasonality_threshold: 0.6,
            kpss_significance: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HorizonClass {
    First,
    Middle,
    Last,
}

impl HorizonClass {
    pub fn of(step: usize, horizon: usize) -> Self {
        if step == 1 {
            HorizonClass::First
        } else if step == horizon {
            HorizonClass::Last
        } else {
            HorizonClass::Middle
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            HorizonClass::First => "first",
            HorizonClass::Middle => "middle",
            HorizonClass::Last => "last",
        }
    }
}

impl fmt::Display for HorizonClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Series-level conditions. `None` marks a condition that could not be
/// evaluated; the series is then left out of that slice only.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesAnnotation {
    pub series: String,
    pub frequency: Frequency,
    pub kpss_stat: Option<f64>,
    pub is_stationary: Option<bool>,
    pub seasonal_strength: Option<f64>,
    pub is_seasonal: Option<bool>,
    pub is_hard: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObservationAnnotation {
    pub series: String,
    pub step: usize,
    pub is_anomaly: Option<bool>,
    pub horizon_class: HorizonClass,
}

/// Flag totals across a collection.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct AnnotationCounts {
    pub series: usize,
    pub observations: usize,
    pub stationary: usize,
    pub non_stationary: usize,
    pub seasonal: usize,
    pub non_seasonal: usize,
    pub hard: usize,
    pub anomalies: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConditionAnnotations {
    series: BTreeMap<String, SeriesAnnotation>,
    observations: BTreeMap<(String, usize), ObservationAnnotation>,
    warnings: Vec<String>,
}

impl ConditionAnnotations {
    pub fn series(&self, id: &str) -> Option<&SeriesAnnotation> {
        self.series.get(id)
    }

    pub fn observation(&self, id: &str, step: usize) -> Option<&ObservationAnnotation> {
        self.observations.get(&(id.to_string(), step))
    }

    pub fn series_annotations(&self) -> impl Iterator<Item = &SeriesAnnotation> {
        self.series.values()
    }

    pub fn observation_annotations(&self) -> impl Iterator<Item = &ObservationAnnotation> {
        self.observations.values()
    }

    /// Per-series problems that caused partial annotation.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn counts(&self) -> AnnotationCounts {
        let mut c = AnnotationCounts {
            series: self.series.len(),
            observations: self.observations.len(),
            ..Default::default()
        };
        for s in self.series.values() {
            match s.is_stationary {
                Some(true) => c.stationary += 1,
                Some(false) => c.non_stationary += 1,
                None => {}
            }
            match s.is_seasonal {
                Some(true) => c.seasonal += 1,
                Some(false) => c.non_seasonal += 1,
                None => {}
            }
            c.hard += usize::from(s.is_hard == Some(true));
        }
        c.anomalies = self
            .observations
            .values()
            .filter(|o| o.is_anomaly == Some(true))
            .count();
        c
    }

    /// `unique_id,is_stationary,kpss_stat,seasonal_strength,is_seasonal,frequency,is_hard`
    pub fn write_series_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "unique_id",
            "is_stationary",
            "kpss_stat",
            "seasonal_strength",
            "is_seasonal",
            "frequency",
            "is_hard",
        ])?;
        for s in self.series.values() {
            w.write_record([
                s.series.clone(),
                opt(s.is_stationary),
                opt(s.kpss_stat),
                opt(s.seasonal_strength),
                opt(s.is_seasonal),
                s.frequency.to_string(),
                opt(s.is_hard),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// `unique_id,horizon,is_anomaly,horizon_class`
    pub fn write_observation_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["unique_id", "horizon", "is_anomaly", "horizon_class"])?;
        for o in self.observations.values() {
            w.write_record([
                o.series.clone(),
                o.step.to_string(),
                opt(o.is_anomaly),
                o.horizon_class.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

struct SeriesOutcome {
    annotation: SeriesAnnotation,
    observations: Vec<ObservationAnnotation>,
    warnings: Vec<String>,
}

/// Annotates every series of `train` (and its holdout window from `test`).
/// Failures of individual tests are recorded as warnings and leave the
/// corresponding field undefined.
pub fn annotate(
    train: &SeriesCollection,
    test: &SeriesCollection,
    profiles: &BTreeMap<String, BaselineProfile>,
    hardness: &BTreeMap<String, Hardness>,
    config: &AspectConfig,
) -> Result<ConditionAnnotations, AspectError> {
    kpss_critical_value(config.kpss_significance)?;

    let series: Vec<_> = train.iter().collect();
    let outcomes: Vec<SeriesOutcome> = series
        .par_iter()
        .map(|s| {
            let id = s.id();
            let mut warnings = Vec::new();
            let kpss_stat = match kpss_statistic(s.values()) {
                Ok(v) => Some(v),
                Err(e) => {
                    warnings.push(format!("series `{id}`: stationarity undefined: {e}"));
                    None
                }
            };
            let cv = kpss_critical_value(config.kpss_significance).expect("validated above");
            let strength = match seasonal_strength(s.values(), s.frequency().season_length()) {
                Ok(v) => Some(v),
                Err(e) => {
                    warnings.push(format!("series `{id}`: seasonality undefined: {e}"));
                    None
                }
            };
            let is_hard = hardness.get(id).map(|h| h.is_hard);
            if is_hard.is_none() {
                warnings.push(format!("series `{id}`: hardness undefined: no baseline profile"));
            }
            let annotation = SeriesAnnotation {
                series: id.to_string(),
                frequency: s.frequency(),
                kpss_stat,
                is_stationary: kpss_stat.map(|k| k <= cv),
                seasonal_strength: strength,
                is_seasonal: strength.map(|v| is_seasonal(v, config.seasonality_threshold)),
                is_hard,
            };

            let horizon = test.get(id).map_or(0, |t| t.len());
            let profile = profiles.get(id);
            let observations = (1..=horizon)
                .map(|step| ObservationAnnotation {
                    series: id.to_string(),
                    step,
                    is_anomaly: profile.and_then(|p| p.anomalies.get(step - 1).copied()),
                    horizon_class: HorizonClass::of(step, horizon),
                })
                .collect();
            if horizon > 0 && profile.is_none() {
                warnings.push(format!("series `{id}`: anomaly flags undefined: no baseline profile"));
            }
            SeriesOutcome {
                annotation,
                observations,
                warnings,
            }
        })
        .collect();

    let mut out = ConditionAnnotations::default();
    for o in outcomes {
        for obs in o.observations {
            out.observations.insert((obs.series.clone(), obs.step), obs);
        }
        out.warnings.extend(o.warnings);
        out.series.insert(o.annotation.series.clone(), o.annotation);
    }
    Ok(out)
}
