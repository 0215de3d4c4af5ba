//! Sample summaries and confidence intervals for Monte Carlo output.

use crate::error::{CoreError, Result};

/// Two-sided 95% normal quantile used for all reported intervals.
pub const Z_95: f64 = 1.96;

/// Mean and standard error of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats {
    pub n: usize,
    pub mean: f64,
    pub std_error: f64,
}

impl SampleStats {
    /// `mean +/- 1.96 * std_error`.
    pub fn ci95(&self) -> (f64, f64) {
        (self.mean - Z_95 * self.std_error, self.mean + Z_95 * self.std_error)
    }
}

/// Computes mean and standard error of the mean.
///
/// Values may sit near the overflow edge (payoffs on exploded paths are
/// saturated around 1e300), so both passes run on data rescaled by the
/// largest magnitude: neither the running sum nor the squared deviations
/// ever exceed a small multiple of `n`.
pub fn summarize(values: &[f64]) -> Result<SampleStats> {
    if values.is_empty() {
        return Err(CoreError::Data("cannot summarize an empty sample".into()));
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(CoreError::Numerical(format!("non-finite sample value {bad}")));
    }
    let n = values.len();
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Ok(SampleStats { n, mean: 0.0, std_error: 0.0 });
    }
    let mean_scaled = values.iter().map(|v| v / scale).sum::<f64>() / n as f64;
    let std_error = if n == 1 {
        0.0
    } else {
        let ss: f64 = values
            .iter()
            .map(|v| {
                let d = v / scale - mean_scaled;
                d * d
            })
            .sum();
        scale * (ss / (n as f64 * (n - 1) as f64)).sqrt()
    };
    Ok(SampleStats { n, mean: scale * mean_scaled, std_error })
}

/// Wilson 95% score interval for a binomial proportion.
///
/// Preferred over the normal approximation because the lower bound stays
/// meaningful for rare events: it is zero exactly when `successes == 0`.
pub fn wilson_interval(successes: u64, trials: u64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(CoreError::Data("Wilson interval needs at least one trial".into()));
    }
    if successes > trials {
        return Err(CoreError::Data(format!(
            "successes {successes} exceed trials {trials}"
        )));
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z_95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    Ok(((center - half).max(0.0), (center + half).min(1.0)))
}
