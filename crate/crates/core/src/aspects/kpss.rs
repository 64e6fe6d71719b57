//! KPSS test for level stationarity.

use super::AspectError;

/// Smallest sample the statistic is computed on.
pub const KPSS_MIN_LENGTH: usize = 8;

/// Tabulated level-stationarity critical values as (significance, value).
pub const KPSS_LEVEL_CRITICAL_VALUES: [(f64, f64); 4] = [(0.10, 0.347), (0.05, 0.463), (0.025, 0.574), (0.01, 0.739)];

/// Bartlett lag truncation `floor(4 * (n / 100)^(1/4))`.
pub fn kpss_lags(n: usize) -> usize {
    (4.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

/// Newey-West long-run variance of `resid` with Bartlett weights.
pub fn bartlett_long_run_variance(resid: &[f64], lags: usize) -> f64 {
    let n = resid.len();
    let mut acc: f64 = resid.iter().map(|e| e * e).sum();
    for lag in 1..=lags.min(n.saturating_sub(1)) {
        let weight = 1.0 - lag as f64 / (lags as f64 + 1.0);
        let cov: f64 = resid[lag..].iter().zip(resid).map(|(a, b)| a * b).sum();
        acc += 2.0 * weight * cov;
    }
    acc / n as f64
}

/// KPSS statistic around a constant mean. A constant series yields 0.
pub fn kpss_statistic(values: &[f64]) -> Result<f64, AspectError> {
    let n = values.len();
    if n < KPSS_MIN_LENGTH {
        return Err(AspectError::SeriesTooShort {
            len: n,
            required: KPSS_MIN_LENGTH,
        });
    }
    if values.iter().all(|v| *v == values[0]) {
        return Ok(0.0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let resid: Vec<f64> = values.iter().map(|v| v - mean).collect();

    let mut partial = 0.0;
    let mut eta = 0.0;
    for e in &resid {
        partial += e;
        eta += partial * partial;
    }
    eta /= (n * n) as f64;

    let lrv = bartlett_long_run_variance(&resid, kpss_lags(n));
    if lrv <= 0.0 {
        return Ok(0.0);
    }
    Ok(eta / lrv)
}

pub fn kpss_critical_value(significance: f64) -> Result<f64, AspectError> {
    KPSS_LEVEL_CRITICAL_VALUES
        .iter()
        .find(|(s, _)| (s - significance).abs() < 1e-9)
        .map(|(_, cv)| *cv)
        .ok_or(AspectError::UnsupportedSignificance(significance))
}

/// True when level stationarity is not rejected at `significance`.
pub fn kpss_is_stationary(values: &[f64], significance: f64) -> Result<bool, AspectError> {
    let cv = kpss_critical_value(significance)?;
    Ok(kpss_statistic(values)? <= cv)
}
