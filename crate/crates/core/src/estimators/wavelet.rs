use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use super::{check_series, EstimateError, FitConfig, HurstEstimate, Method};
use crate::fit::least_squares;
use crate::math;

/// Levels with fewer detail coefficients than this are left out of the fit.
const MIN_COEFFS_PER_LEVEL: usize = 4;

/// Orthonormal Haar detail coefficients, finest level first. The input is
/// truncated to the largest power of two not exceeding its length.
pub fn haar_detail_levels(series: &[f64]) -> Vec<Vec<f64>> {
    if series.len() < 2 {
        return Vec::new();
    }
    let n = 1usize << (usize::BITS - 1 - series.len().leading_zeros());
    let mut approx = series[..n].to_vec();
    let mut levels = Vec::new();
    while approx.len() >= 2 {
        let (next, detail): (Vec<f64>, Vec<f64>) = approx
            .chunks_exact(2)
            .map(|p| ((p[0] + p[1]) * FRAC_1_SQRT_2, (p[0] - p[1]) * FRAC_1_SQRT_2))
            .unzip();
        levels.push(detail);
        approx = next;
    }
    levels
}

fn std_dev(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    math::sqrt(xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n)
}

/// Haar wavelet estimate: `log2 sigma_j` against level `j` has slope
/// `H + 1/2`.
pub fn wavelet_hurst(series: &[f64], cfg: &FitConfig) -> Result<HurstEstimate, EstimateError> {
    check_series(series, cfg)?;
    let mut level = Vec::new();
    let mut log_sigma = Vec::new();
    for (j, detail) in haar_detail_levels(series).iter().enumerate() {
        if detail.len() < MIN_COEFFS_PER_LEVEL {
            break;
        }
        let sigma = std_dev(detail);
        if sigma == 0.0 {
            return Err(EstimateError::DegenerateSignal);
        }
        level.push((j + 1) as f64);
        log_sigma.push(math::log2(sigma));
    }
    let fit = least_squares(&level, &log_sigma).ok_or(EstimateError::DegenerateSignal)?;
    Ok(HurstEstimate::new(Method::Wavelet, fit.slope - 0.5, fit))
}
