//! Input fixtures shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Seasonal signal plus Gaussian noise, `n` points with period `m`.
pub fn seasonal_series(seed: u64, n: usize, m: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|t| {
            let e: f64 = StandardNormal.sample(&mut rng);
            100.0 + 20.0 * (std::f64::consts::TAU * t as f64 / m as f64).sin() + 4.0 * e
        })
        .collect()
}
