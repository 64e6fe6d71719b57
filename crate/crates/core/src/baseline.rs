//! Seasonal naive baseline: forecasts, residual-based prediction intervals,
//! anomaly flags and series hardness.

use std::collections::BTreeMap;

use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::data::TimeSeries;
use crate::metrics::smape;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BaselineError {
    #[error("in-sample length {len} is below the required {required}")]
    InsampleTooShort { len: usize, required: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("confidence level {0} must lie in (0, 1)")]
    InvalidLevel(f64),
    #[error("percentile {0} must lie in (0, 1]")]
    InvalidPercentile(f64),
    #[error("empty input")]
    EmptyInput,
}

/// Repeats the last observed seasonal cycle over `horizon` steps.
pub fn seasonal_naive_forecast(insample: &[f64], m: usize, horizon: usize) -> Result<Vec<f64>, BaselineError> {
    if m == 0 || insample.len() < m {
        return Err(BaselineError::InsampleTooShort {
            len: insample.len(),
            required: m.max(1),
        });
    }
    let start = insample.len() - m;
    Ok((0..horizon).map(|h| insample[start + h % m]).collect())
}

/// Two-sided standard normal quantile for a central `level` interval.
pub fn normal_critical_value(level: f64) -> Result<f64, BaselineError> {
    if !(level > 0.0 && level < 1.0) {
        return Err(BaselineError::InvalidLevel(level));
    }
    let normal = Normal::standard();
    Ok(normal.inverse_cdf(0.5 + level / 2.0))
}

/// Half-width multiplier growth: the interval widens by `sqrt(k + 1)` where
/// `k` counts completed seasonal cycles before `step` (1-based).
pub fn horizon_widening(step: usize, m: usize) -> f64 {
    let k = (step - 1) / m;
    ((k + 1) as f64).sqrt()
}

/// Sample standard deviation of `y[i] - y[i - m]` over the in-sample window.
pub fn seasonal_residual_sigma(insample: &[f64], m: usize) -> Result<f64, BaselineError> {
    let required = 2 * m.max(1);
    if m == 0 || insample.len() < required || insample.len() - m < 2 {
        return Err(BaselineError::InsampleTooShort {
            len: insample.len(),
            required: required.max(m + 2),
        });
    }
    let residuals: Vec<f64> = insample[m..]
        .iter()
        .zip(insample)
        .map(|(y, lagged)| y - lagged)
        .collect();
    let n = residuals.len() as f64;
    let mean = residuals.iter().sum::<f64>() / n;
    let ss: f64 = residuals.iter().map(|r| (r - mean).powi(2)).sum();
    Ok((ss / (n - 1.0)).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionInterval {
    pub forecast: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub sigma: f64,
    /// Set when the residual scale is zero and the interval collapses to the
    /// point forecast.
    pub degenerate: bool,
}

/// Gaussian prediction interval around the seasonal naive forecast.
pub fn seasonal_naive_interval(
    insample: &[f64],
    m: usize,
    horizon: usize,
    level: f64,
) -> Result<PredictionInterval, BaselineError> {
    let z = normal_critical_value(level)?;
    let sigma = seasonal_residual_sigma(insample, m)?;
    let forecast = seasonal_naive_forecast(insample, m, horizon)?;
    let (lower, upper) = forecast
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            let half = z * sigma * horizon_widening(i + 1, m);
            (f - half, f + half)
        })
        .unzip();
    Ok(PredictionInterval {
        forecast,
        lower,
        upper,
        sigma,
        degenerate: sigma == 0.0,
    })
}

/// Marks actuals strictly outside `[lower, upper]`.
pub fn flag_anomalies(actuals: &[f64], lower: &[f64], upper: &[f64]) -> Result<Vec<bool>, BaselineError> {
    if actuals.len() != lower.len() || lower.len() != upper.len() {
        return Err(BaselineError::LengthMismatch {
            left: actuals.len(),
            right: lower.len().min(upper.len()),
        });
    }
    Ok(actuals
        .iter()
        .zip(lower.iter().zip(upper))
        .map(|(&y, (&lo, &hi))| y < lo || y > hi)
        .collect())
}

/// Seasonal naive results for one series' holdout window.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineProfile {
    pub series: String,
    pub interval: PredictionInterval,
    pub anomalies: Vec<bool>,
    /// Holdout SMAPE of the seasonal naive forecast.
    pub smape: f64,
}

/// Fits the baseline on `train` and scores it on `test`.
pub fn baseline_profile(train: &TimeSeries, test: &TimeSeries, level: f64) -> Result<BaselineProfile, BaselineError> {
    let m = train.frequency().season_length();
    let interval = seasonal_naive_interval(train.values(), m, test.len(), level)?;
    let anomalies = flag_anomalies(test.values(), &interval.lower, &interval.upper)?;
    let smape = smape(test.values(), &interval.forecast).map_err(|_| BaselineError::EmptyInput)?;
    Ok(BaselineProfile {
        series: train.id().to_string(),
        interval,
        anomalies,
        smape,
    })
}

/// Nearest-rank percentile: the smallest value whose rank is at least
/// `ceil(p * n)`.
pub fn nearest_rank_percentile(values: &[f64], p: f64) -> Result<f64, BaselineError> {
    if values.is_empty() {
        return Err(BaselineError::EmptyInput);
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(BaselineError::InvalidPercentile(p));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    // Guard against p * n landing a hair above an integer.
    let rank = ((p * sorted.len() as f64) - 1e-9).ceil().max(1.0) as usize;
    Ok(sorted[rank.min(sorted.len()) - 1])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hardness {
    pub score: f64,
    pub is_hard: bool,
}

/// A series is hard when its baseline SMAPE strictly exceeds the
/// collection-wide nearest-rank percentile.
pub fn hardness_scores(
    profiles: &[BaselineProfile],
    percentile: f64,
) -> Result<BTreeMap<String, Hardness>, BaselineError> {
    let scores: Vec<f64> = profiles.iter().map(|p| p.smape).collect();
    let cutoff = nearest_rank_percentile(&scores, percentile)?;
    Ok(profiles
        .iter()
        .map(|p| {
            (
                p.series.clone(),
                Hardness {
                    score: p.smape,
                    is_hard: p.smape > cutoff,
                },
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const Z99: f64 = 2.575829;

    fn profile_with_score(id: &str, score: f64) -> BaselineProfile {
        BaselineProfile {
            series: id.to_string(),
            interval: PredictionInterval {
                forecast: vec![],
                lower: vec![],
                upper: vec![],
                sigma: 0.0,
                degenerate: true,
            },
            anomalies: vec![],
            smape: score,
        }
    }

    #[test]
    fn seasonal_naive_examples() {
        let y = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(seasonal_naive_forecast(&y, 4, 4).unwrap(), y);
        assert_eq!(
            seasonal_naive_forecast(&y, 4, 8).unwrap(),
            [1.0, 2.0, 3.0, 4.0, 1.0, 2.0, 3.0, 4.0]
        );
        assert_eq!(seasonal_naive_forecast(&[5.0, 7.0], 1, 3).unwrap(), [7.0, 7.0, 7.0]);
        assert!(matches!(
            seasonal_naive_forecast(&[1.0], 4, 4),
            Err(BaselineError::InsampleTooShort { .. })
        ));
    }

    #[test]
    fn critical_value_at_99() {
        assert_relative_eq!(normal_critical_value(0.99).unwrap(), Z99, epsilon = 5e-7);
        assert!(normal_critical_value(1.0).is_err());
    }

    #[test]
    fn widening_steps() {
        let widths: Vec<f64> = (1..=8).map(|h| Z99 * horizon_widening(h, 4)).collect();
        for w in &widths[..4] {
            assert_relative_eq!(*w, Z99);
        }
        for w in &widths[4..] {
            assert_relative_eq!(*w, Z99 * 2f64.sqrt());
        }
        assert!((1..=12).all(|h| horizon_widening(h, 12) == 1.0));
    }

    #[test]
    fn unit_sigma_half_widths() {
        // Residuals y[i] - y[i-4] alternate +/-a with sample sd 1.
        let n_res = 8;
        let a = ((n_res - 1) as f64 / n_res as f64).sqrt();
        let mut y = vec![0.0, 10.0, 20.0, 30.0];
        for i in 0..n_res {
            let r = if i % 2 == 0 { a } else { -a };
            y.push(y[i] + r);
        }
        let pi = seasonal_naive_interval(&y, 4, 8, 0.99).unwrap();
        assert_relative_eq!(pi.sigma, 1.0, epsilon = 1e-12);
        for h in 0..8 {
            let half = pi.upper[h] - pi.forecast[h];
            let expected = if h < 4 { Z99 } else { Z99 * 2f64.sqrt() };
            assert_relative_eq!(half, expected, epsilon = 1e-6);
            assert_relative_eq!(pi.forecast[h] - pi.lower[h], half, epsilon = 1e-12);
        }
    }

    #[test]
    fn periodic_insample_gives_zero_width() {
        let y: Vec<f64> = (0..24).map(|i| (i % 4) as f64).collect();
        let pi = seasonal_naive_interval(&y, 4, 6, 0.99).unwrap();
        assert!(pi.degenerate);
        assert_eq!(pi.lower, pi.forecast);
        assert_eq!(pi.upper, pi.forecast);
        assert_eq!(
            flag_anomalies(&pi.forecast, &pi.lower, &pi.upper).unwrap(),
            vec![false; 6]
        );
        let mut off = pi.forecast.clone();
        off[2] += 0.5;
        assert!(flag_anomalies(&off, &pi.lower, &pi.upper).unwrap()[2]);
    }

    #[test]
    fn anomaly_boundary_is_inside() {
        let flags = flag_anomalies(&[1.0, 0.0, 2.0, 2.0001], &[0.0; 4], &[2.0; 4]).unwrap();
        assert_eq!(flags, vec![false, false, false, true]);
        assert!(matches!(
            flag_anomalies(&[1.0], &[0.0, 0.0], &[1.0, 1.0]),
            Err(BaselineError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn hardness_examples() {
        let ten: Vec<_> = (1..=10)
            .map(|i| profile_with_score(&format!("s{i:02}"), i as f64))
            .collect();
        assert_eq!(
            nearest_rank_percentile(&(1..=10).map(f64::from).collect::<Vec<_>>(), 0.9).unwrap(),
            9.0
        );
        let h = hardness_scores(&ten, 0.9).unwrap();
        let hard: Vec<&str> = h.iter().filter(|(_, v)| v.is_hard).map(|(k, _)| k.as_str()).collect();
        assert_eq!(hard, ["s10"]);

        let same: Vec<_> = (0..7).map(|i| profile_with_score(&format!("s{i}"), 3.0)).collect();
        assert!(hardness_scores(&same, 0.9).unwrap().values().all(|h| !h.is_hard));

        let one = [profile_with_score("only", 12.0)];
        assert!(!hardness_scores(&one, 0.9).unwrap()["only"].is_hard);

        assert_eq!(hardness_scores(&[], 0.9), Err(BaselineError::EmptyInput));
    }

    proptest! {
        #[test]
        fn raising_level_never_adds_flags(
            insample in prop::collection::vec(-50.0f64..50.0, 16..40),
            test in prop::collection::vec(-80.0f64..80.0, 4),
            low in 0.5f64..0.95,
            bump in 0.0f64..0.04,
        ) {
            let lo = seasonal_naive_interval(&insample, 4, 4, low).unwrap();
            let hi = seasonal_naive_interval(&insample, 4, 4, low + bump).unwrap();
            let f_lo = flag_anomalies(&test, &lo.lower, &lo.upper).unwrap();
            let f_hi = flag_anomalies(&test, &hi.lower, &hi.upper).unwrap();
            for (a, b) in f_lo.iter().zip(&f_hi) {
                prop_assert!(*a || !*b);
            }
        }

        #[test]
        fn flags_survive_rescaling(
            insample in prop::collection::vec(-50.0f64..50.0, 16..40),
            test in prop::collection::vec(-80.0f64..80.0, 8),
            c in prop::sample::select(vec![0.5f64, 2.0, 4.0, 8.0]),
        ) {
            let base = seasonal_naive_interval(&insample, 4, 8, 0.99).unwrap();
            let scaled_in: Vec<f64> = insample.iter().map(|v| v * c).collect();
            let scaled_test: Vec<f64> = test.iter().map(|v| v * c).collect();
            let scaled = seasonal_naive_interval(&scaled_in, 4, 8, 0.99).unwrap();
            prop_assert_eq!(
                flag_anomalies(&test, &base.lower, &base.upper).unwrap(),
                flag_anomalies(&scaled_test, &scaled.lower, &scaled.upper).unwrap()
            );
        }

        #[test]
        fn distinct_scores_mark_at_most_top_decile(
            scores in prop::collection::btree_set(0u32..100_000, 1..200),
        ) {
            let profiles: Vec<_> = scores.iter().enumerate()
                .map(|(i, s)| profile_with_score(&format!("s{i:04}"), f64::from(*s) / 7.0))
                .collect();
            let n = profiles.len();
            let hard = hardness_scores(&profiles, 0.9).unwrap().values().filter(|h| h.is_hard).count();
            // Brute force: the count strictly above the ceil(0.9 n)-th smallest.
            let rank = (9 * n).div_ceil(10);
            prop_assert_eq!(hard, n - rank);
            prop_assert!(hard <= n.div_ceil(10));
        }
    }
}
