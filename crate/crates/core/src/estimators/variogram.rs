use alloc::vec::Vec;

use super::{check_series, EstimateError, FitConfig, HurstEstimate, Method};
use crate::fit::least_squares;
use crate::math;

/// Log-spaced lags `round(min_lag * 2^(j / lags_per_octave))`, deduplicated,
/// up to `floor(max_lag_fraction * n)`.
pub fn variogram_lags(n: usize, cfg: &FitConfig) -> Vec<usize> {
    let max_lag = math::floor(cfg.max_lag_fraction * n as f64) as usize;
    let mut lags = Vec::new();
    let mut j = 0u32;
    loop {
        let w = math::round(
            cfg.min_lag as f64 * math::powf(2.0, j as f64 / cfg.lags_per_octave as f64),
        ) as usize;
        if w > max_lag {
            break;
        }
        if lags.last() != Some(&w) {
            lags.push(w);
        }
        j += 1;
    }
    lags
}

/// Variance-of-increments estimate: the slope of `log V(w)` against `log w`
/// is `2H`.
pub fn variogram_hurst(series: &[f64], cfg: &FitConfig) -> Result<HurstEstimate, EstimateError> {
    check_series(series, cfg)?;
    let lags = variogram_lags(series.len(), cfg);
    if lags.len() < 2 {
        return Err(EstimateError::TooShort {
            len: series.len(),
            min: 2 * cfg.min_lag * 4,
        });
    }
    let mut log_w = Vec::with_capacity(lags.len());
    let mut log_v = Vec::with_capacity(lags.len());
    for &w in &lags {
        let pairs = series.len() - w;
        let sum: f64 = series[w..]
            .iter()
            .zip(series)
            .map(|(&late, &early)| {
                let d = late - early;
                d * d
            })
            .sum();
        let v = sum / pairs as f64;
        if v == 0.0 {
            return Err(EstimateError::DegenerateSignal);
        }
        log_w.push(math::ln(w as f64));
        log_v.push(math::ln(v));
    }
    let fit = least_squares(&log_w, &log_v).ok_or(EstimateError::DegenerateSignal)?;
    Ok(HurstEstimate::new(Method::Variogram, fit.slope / 2.0, fit))
}
