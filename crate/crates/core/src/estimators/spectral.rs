use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{check_series, EstimateError, FitConfig, HurstEstimate, Method, Taper};
use crate::fft::fft_real;
use crate::fit::least_squares;
use crate::math;

/// Residual RMS below this fraction of the input's spread counts as nothing
/// left to analyse.
const RESIDUAL_FLOOR: f64 = 1e-10;

/// Subtracts the least-squares line over the sample index.
pub fn linear_detrend(series: &[f64]) -> Result<Vec<f64>, EstimateError> {
    if series.len() < 2 {
        return Err(EstimateError::TooShort {
            len: series.len(),
            min: 2,
        });
    }
    let n = series.len() as f64;
    let mean_t = (n - 1.0) / 2.0;
    let mean_y = series.iter().sum::<f64>() / n;
    let mut sty = 0.0;
    let mut stt = 0.0;
    for (t, &y) in series.iter().enumerate() {
        let dt = t as f64 - mean_t;
        sty += dt * (y - mean_y);
        stt += dt * dt;
    }
    let slope = sty / stt;
    Ok(series
        .iter()
        .enumerate()
        .map(|(t, &y)| (y - mean_y) - slope * (t as f64 - mean_t))
        .collect())
}

fn rms(xs: &[f64]) -> f64 {
    math::sqrt(xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64)
}

/// Periodogram slope estimate. The fitted spectrum falls as `f^-beta` with
/// `beta = 2H + 1`.
pub fn spectral_hurst(series: &[f64], cfg: &FitConfig) -> Result<HurstEstimate, EstimateError> {
    check_series(series, cfg)?;
    let n = series.len();
    let mean = series.iter().sum::<f64>() / n as f64;
    let spread = math::sqrt(series.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64);
    let mut residual = linear_detrend(series)?;
    if spread == 0.0 || rms(&residual) <= RESIDUAL_FLOOR * spread {
        return Err(EstimateError::DegenerateSignal);
    }
    if cfg.spectral_taper == Taper::Hann {
        let denom = (n - 1) as f64;
        for (t, r) in residual.iter_mut().enumerate() {
            *r *= 0.5 - 0.5 * math::cos(2.0 * PI * t as f64 / denom);
        }
    }

    let lo = cfg.spectral_low_cut.max(1);
    let hi = (math::floor(cfg.spectral_high_fraction * (n / 2) as f64) as usize).min(n / 2);
    if hi < lo + 1 {
        return Err(EstimateError::InvalidConfig(
            "spectral fit window holds fewer than two bins",
        ));
    }
    let spectrum = fft_real(&residual);
    let mut log_f = Vec::with_capacity(hi - lo + 1);
    let mut log_p = Vec::with_capacity(hi - lo + 1);
    for (k, c) in spectrum.iter().enumerate().take(hi + 1).skip(lo) {
        let p = c.norm_sqr() / n as f64;
        if p == 0.0 {
            return Err(EstimateError::DegenerateSignal);
        }
        log_f.push(math::ln(k as f64 / n as f64));
        log_p.push(math::ln(p));
    }
    let fit = least_squares(&log_f, &log_p).ok_or(EstimateError::DegenerateSignal)?;
    let beta = -fit.slope;
    Ok(HurstEstimate::new(
        Method::Spectral,
        (beta - 1.0) / 2.0,
        fit,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::least_squares;

    fn ramp_noise(n: usize) -> Vec<f64> {
        (0..n)
            .map(|t| 0.3 * t as f64 - 2.0 + math::sin(t as f64 * 1.7) * 4.0 + ((t * t) % 7) as f64)
            .collect()
    }

    #[test]
    fn detrend_removes_line() {
        let y: Vec<f64> = (0..100).map(|t| 3.0 * t as f64 + 7.0).collect();
        for r in linear_detrend(&y).unwrap() {
            assert!(r.abs() < 1e-10, "{r}");
        }
    }

    #[test]
    fn detrend_fixed_point() {
        // symmetric about the centre index: zero mean and zero slope already
        let y = [1.0, -1.0, -1.0, 1.0];
        let r = linear_detrend(&y).unwrap();
        for (a, b) in r.iter().zip(&y) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn detrended_output_refits_flat() {
        let y = ramp_noise(500);
        let r = linear_detrend(&y).unwrap();
        let t: Vec<f64> = (0..r.len()).map(|t| t as f64).collect();
        let refit = least_squares(&t, &r).unwrap();
        let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(refit.slope.abs() <= 1e-9 * scale);
        assert!((r.iter().sum::<f64>() / r.len() as f64).abs() <= 1e-9 * scale);
    }

    #[test]
    fn detrend_too_short() {
        assert!(linear_detrend(&[1.0]).is_err());
    }

    #[test]
    fn exact_line_is_degenerate() {
        let y: Vec<f64> = (0..1024).map(|t| 2.0 * t as f64 + 1.0).collect();
        assert_eq!(
            spectral_hurst(&y, &FitConfig::default()),
            Err(EstimateError::DegenerateSignal)
        );
    }

    #[test]
    fn constant_is_degenerate() {
        assert_eq!(
            spectral_hurst(&[0.5; 128], &FitConfig::default()),
            Err(EstimateError::DegenerateSignal)
        );
    }

    #[test]
    fn fit_uses_requested_bins() {
        let y = ramp_noise(1000);
        let e = spectral_hurst(&y, &FitConfig::default()).unwrap();
        // bins 1..=125 for N = 1000 at a quarter of Nyquist
        assert_eq!(e.points_used(), 125);
        let full = FitConfig {
            spectral_high_fraction: 1.0,
            ..FitConfig::default()
        };
        assert_eq!(spectral_hurst(&y, &full).unwrap().points_used(), 500);
    }
}
