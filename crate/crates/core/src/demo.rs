//! Synthetic demo data: 20 monthly series and three forecast models.
//!
//! * `Dominant` tracks the actuals to within 0.2%, so it has the lowest loss
//!   on every dimension.
//! * `Drift` is a seasonal naive forecast with the mean training drift added.
//! * `DriftJitter` is `Drift` multiplied by `1 + u`, `|u| <= 0.5%`, and is
//!   written to its own file.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde_json::json;

use crate::data::{write_actuals, write_forecasts, ForecastRow, ForecastSet, Frequency, SeriesCollection, TimeSeries};

pub const DEMO_SEED: u64 = 0x5EED_2024;
pub const DEMO_SERIES: usize = 20;
pub const DEMO_LENGTH: usize = 72;
pub const DOMINANT: &str = "Dominant";
pub const DRIFT: &str = "Drift";
pub const DRIFT_JITTER: &str = "DriftJitter";

#[derive(Debug, Clone)]
pub struct DemoData {
    pub actuals: SeriesCollection,
    /// `Dominant` and `Drift`.
    pub forecasts: ForecastSet,
    /// `DriftJitter` only.
    pub jitter: ForecastSet,
}

fn round3(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}

fn synthetic_values(kind: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let noise = Normal::new(0.0, 1.0).expect("unit normal");
    let level = rng.random_range(80.0..220.0);
    let amplitude = rng.random_range(0.15..0.3) * level;
    let phase = rng.random_range(0.0..std::f64::consts::TAU);
    let season = |t: usize| (std::f64::consts::TAU * t as f64 / 12.0 + phase).sin();
    let mut walk = level;
    (0..DEMO_LENGTH)
        .map(|t| {
            let e: f64 = noise.sample(rng);
            match kind {
                // Stationary and seasonal.
                0 => level + amplitude * season(t) + 0.04 * level * e,
                // Trending and seasonal.
                1 => level + 0.012 * level * t as f64 + amplitude * season(t) + 0.04 * level * e,
                // Random walk.
                2 => {
                    walk += 0.03 * level * e;
                    walk.max(5.0)
                }
                // White noise around a level.
                _ => level + 0.08 * level * e,
            }
        })
        .map(round3)
        .collect()
}

/// Generates the demo deterministically from `seed`.
pub fn generate(seed: u64) -> DemoData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = NaiveDate::from_ymd_opt(2015, 1, 1).expect("valid date");
    let h = Frequency::Monthly.horizon();
    let m = Frequency::Monthly.season_length();

    let mut actuals = SeriesCollection::new();
    let mut main_rows = Vec::new();
    let mut jitter_rows = Vec::new();
    for i in 0..DEMO_SERIES {
        let id = format!("S{:02}", i + 1);
        let mut values = synthetic_values(i % 4, &mut rng);
        let n_train = DEMO_LENGTH - h;
        if i % 5 == 2 {
            // Holdout shock.
            let step = rng.random_range(2..h - 1);
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let size = 0.6 * values[n_train - 1].abs();
            values[n_train + step] = round3(values[n_train + step] + sign * size);
        }
        let series = TimeSeries::from_start(&id, start, values.clone(), Frequency::Monthly);

        let train = &values[..n_train];
        let drift = (train[n_train - 1] - train[0]) / (n_train - 1) as f64;
        for (k, ds) in series.holdout_timestamps().iter().enumerate() {
            let actual = values[n_train + k];
            let dominant = round3(actual * (1.0 + rng.random_range(-0.002..0.002)));
            let naive = train[n_train - m + k % m] + drift * (k + 1) as f64;
            let drift_fc = round3(naive);
            let jitter_fc = round3(drift_fc * (1.0 + rng.random_range(-0.005..0.005)));
            let row = |model: &str, y_hat: f64| ForecastRow {
                series: id.clone(),
                ds: *ds,
                model: model.to_string(),
                y_hat,
            };
            main_rows.push(row(DOMINANT, dominant));
            main_rows.push(row(DRIFT, drift_fc));
            jitter_rows.push(row(DRIFT_JITTER, jitter_fc));
        }
        actuals.insert(series).expect("unique demo ids");
    }
    let forecasts = ForecastSet::from_rows(main_rows, &actuals).expect("demo forecasts are valid");
    let jitter = ForecastSet::from_rows(jitter_rows, &actuals).expect("demo forecasts are valid");
    DemoData {
        actuals,
        forecasts,
        jitter,
    }
}

pub fn demo_config_json() -> String {
    let cfg = json!({
        "actuals": [{ "path": "actuals.csv", "frequency": "monthly" }],
        "forecasts": ["forecasts.csv", "forecasts_jitter.csv"],
        "metric": "smape",
        "alpha": 0.1,
        "rope": 10.0,
        "reference_model": DRIFT,
        "output_dir": "out"
    });
    serde_json::to_string_pretty(&cfg).expect("static json") + "\n"
}

fn csv_io(e: csv::Error) -> io::Error {
    io::Error::other(e.to_string())
}

/// Writes `actuals.csv`, `forecasts.csv`, `forecasts_jitter.csv` and
/// `config.json` into `dir`; returns the config path.
pub fn write_demo(dir: &Path, seed: u64) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let data = generate(seed);
    write_actuals(&data.actuals, fs::File::create(dir.join("actuals.csv"))?).map_err(csv_io)?;
    write_forecasts(&data.forecasts, fs::File::create(dir.join("forecasts.csv"))?).map_err(csv_io)?;
    write_forecasts(&data.jitter, fs::File::create(dir.join("forecasts_jitter.csv"))?).map_err(csv_io)?;
    let config = dir.join("config.json");
    fs::write(&config, demo_config_json())?;
    Ok(config)
}
