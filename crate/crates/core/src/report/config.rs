use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aggregation::Dimension;
use crate::aspects::kpss_critical_value;
use crate::data::Frequency;
use crate::metrics::Metric;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed config {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{field}: {message}")]
    Invalid { field: &'static str, message: String },
}

fn invalid(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActualsInput {
    pub path: PathBuf,
    pub frequency: Frequency,
}

fn default_metric() -> Metric {
    Metric::Smape
}
fn default_alpha() -> f64 {
    0.10
}
fn default_rope() -> f64 {
    10.0
}
fn default_seasonality_threshold() -> f64 {
    0.6
}
fn default_kpss_significance() -> f64 {
    0.05
}
fn default_anomaly_level() -> f64 {
    0.99
}
fn default_hardness_percentile() -> f64 {
    0.90
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("radar-eval-out")
}

/// A complete run description, read from a JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub actuals: Vec<ActualsInput>,
    #[serde(default)]
    pub forecasts: Vec<PathBuf>,
    #[serde(default = "default_metric")]
    pub metric: Metric,
    /// Tail fraction for the expected shortfall.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Region of practical equivalence, in percent.
    #[serde(default = "default_rope")]
    pub rope: f64,
    #[serde(default = "default_seasonality_threshold")]
    pub seasonality_threshold: f64,
    #[serde(default = "default_kpss_significance")]
    pub kpss_significance: f64,
    #[serde(default = "default_anomaly_level")]
    pub anomaly_level: f64,
    #[serde(default = "default_hardness_percentile")]
    pub hardness_percentile: f64,
    #[serde(default = "Dimension::default_radar_axes")]
    pub radar_axes: Vec<Dimension>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub reference_model: Option<String>,
    /// Worker threads; defaults to the number of available cores.
    #[serde(default)]
    pub threads: Option<usize>,
}

impl RunConfig {
    /// A config with defaults for everything but the inputs.
    pub fn new(actuals: Vec<ActualsInput>, forecasts: Vec<PathBuf>) -> Self {
        Self {
            actuals,
            forecasts,
            metric: default_metric(),
            alpha: default_alpha(),
            rope: default_rope(),
            seasonality_threshold: default_seasonality_threshold(),
            kpss_significance: default_kpss_significance(),
            anomaly_level: default_anomaly_level(),
            hardness_percentile: default_hardness_percentile(),
            radar_axes: Dimension::default_radar_axes(),
            output_dir: default_output_dir(),
            reference_model: None,
            threads: None,
        }
    }

    /// Reads a config file. Relative paths inside it are resolved against
    /// the file's directory.
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        let mut cfg: RunConfig = serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.display().to_string(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        for a in &mut cfg.actuals {
            a.path = resolve(base, &a.path);
        }
        for f in &mut cfg.forecasts {
            *f = resolve(base, f);
        }
        cfg.output_dir = resolve(base, &cfg.output_dir);
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks every scalar invariant and that the actuals files exist.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.actuals.is_empty() {
            return Err(invalid("actuals", "at least one actuals file is required"));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(invalid("alpha", format!("{} is outside (0, 1]", self.alpha)));
        }
        if !(self.rope >= 0.0 && self.rope.is_finite()) {
            return Err(invalid("rope", format!("{} must be a finite value >= 0", self.rope)));
        }
        if !(0.0..=1.0).contains(&self.seasonality_threshold) {
            return Err(invalid(
                "seasonality_threshold",
                format!("{} is outside [0, 1]", self.seasonality_threshold),
            ));
        }
        kpss_critical_value(self.kpss_significance).map_err(|e| invalid("kpss_significance", e.to_string()))?;
        if !(self.anomaly_level > 0.0 && self.anomaly_level < 1.0) {
            return Err(invalid(
                "anomaly_level",
                format!("{} is outside (0, 1)", self.anomaly_level),
            ));
        }
        if !(self.hardness_percentile > 0.0 && self.hardness_percentile < 1.0) {
            return Err(invalid(
                "hardness_percentile",
                format!("{} is outside (0, 1)", self.hardness_percentile),
            ));
        }
        if self.radar_axes.len() < 3 {
            return Err(invalid("radar_axes", "a radar chart needs at least 3 axes"));
        }
        for (i, axis) in self.radar_axes.iter().enumerate() {
            if self.radar_axes[..i].contains(axis) {
                return Err(invalid("radar_axes", format!("`{axis}` listed twice")));
            }
        }
        if self.threads == Some(0) {
            return Err(invalid("threads", "must be at least 1"));
        }
        if let Some(r) = &self.reference_model {
            if r.trim().is_empty() {
                return Err(invalid("reference_model", "must not be empty"));
            }
        }
        for a in &self.actuals {
            if !a.path.is_file() {
                return Err(invalid("actuals", format!("{} does not exist", a.path.display())));
            }
        }
        if self.output_dir.exists() && !self.output_dir.is_dir() {
            return Err(invalid(
                "output_dir",
                format!("{} exists and is not a directory", self.output_dir.display()),
            ));
        }
        Ok(())
    }

    /// Like [`validate`](Self::validate), additionally requiring forecasts.
    pub fn validate_for_run(&self) -> Result<(), ConfigError> {
        self.validate()?;
        if self.forecasts.is_empty() {
            return Err(invalid("forecasts", "at least one forecasts file is required"));
        }
        for f in &self.forecasts {
            if !f.is_file() {
                return Err(invalid("forecasts", format!("{} does not exist", f.display())));
            }
        }
        Ok(())
    }
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}
