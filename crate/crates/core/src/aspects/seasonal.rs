//! Seasonal strength from a classical additive decomposition.

use super::AspectError;

/// Centered moving average of window `m` (a 2×m average for even `m`).
/// Entries where the window does not fit are `None`.
pub fn centered_moving_average(values: &[f64], m: usize) -> Vec<Option<f64>> {
    let n = values.len();
    let half = m / 2;
    let mut trend = vec![None; n];
    if n < m + (m + 1) % 2 {
        return trend;
    }
    for (t, slot) in trend.iter_mut().enumerate().take(n - half).skip(half) {
        let window = &values[t - half..=t + half];
        let value = if m % 2 == 1 {
            window.iter().sum::<f64>() / m as f64
        } else {
            let inner: f64 = window[1..m].iter().sum();
            (0.5 * window[0] + inner + 0.5 * window[m]) / m as f64
        };
        *slot = Some(value);
    }
    trend
}

/// Trend, seasonal and remainder components over the indices where the
/// trend is defined.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// Index of the first defined point in the original series.
    pub offset: usize,
    pub trend: Vec<f64>,
    pub seasonal: Vec<f64>,
    pub remainder: Vec<f64>,
    /// Re-centered seasonal index per season position (`t mod m`).
    pub seasonal_index: Vec<f64>,
}

pub fn classical_decomposition(values: &[f64], m: usize) -> Result<Decomposition, AspectError> {
    if m < 2 {
        return Err(AspectError::InvalidPeriod(m));
    }
    if values.len() < 2 * m {
        return Err(AspectError::SeriesTooShort {
            len: values.len(),
            required: 2 * m,
        });
    }
    let ma = centered_moving_average(values, m);
    let defined: Vec<(usize, f64)> = ma.iter().enumerate().filter_map(|(t, v)| v.map(|v| (t, v))).collect();
    let offset = defined[0].0;

    let mut sums = vec![0.0; m];
    let mut counts = vec![0usize; m];
    for &(t, trend) in &defined {
        sums[t % m] += values[t] - trend;
        counts[t % m] += 1;
    }
    let raw: Vec<f64> = sums.iter().zip(&counts).map(|(s, c)| s / *c as f64).collect();
    let level = raw.iter().sum::<f64>() / m as f64;
    let seasonal_index: Vec<f64> = raw.iter().map(|v| v - level).collect();

    let trend: Vec<f64> = defined.iter().map(|(_, v)| *v).collect();
    let seasonal: Vec<f64> = defined.iter().map(|(t, _)| seasonal_index[t % m]).collect();
    let remainder = defined
        .iter()
        .zip(&seasonal)
        .map(|(&(t, tr), s)| values[t] - tr - s)
        .collect();
    Ok(Decomposition {
        offset,
        trend,
        seasonal,
        remainder,
        seasonal_index,
    })
}

fn variance(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n
}

/// `max(0, 1 - Var(R) / Var(S + R))`. Constant or detrended-flat series
/// score 0.
pub fn seasonal_strength(values: &[f64], m: usize) -> Result<f64, AspectError> {
    let dec = classical_decomposition(values, m)?;
    if values.iter().all(|v| *v == values[0]) {
        return Ok(0.0);
    }
    let detrended: Vec<f64> = dec.seasonal.iter().zip(&dec.remainder).map(|(s, r)| s + r).collect();
    let var_detrended = variance(&detrended);
    let power = values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64;
    if var_detrended <= 1e-24 * power {
        return Ok(0.0);
    }
    let ratio = variance(&dec.remainder) / var_detrended;
    Ok((1.0 - ratio).clamp(0.0, 1.0))
}

pub fn is_seasonal(strength: f64, threshold: f64) -> bool {
    strength >= threshold
}
