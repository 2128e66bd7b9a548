//! Hurst exponent estimators for one-dimensional amplitude series.
//!
//! Three independent log-log fits are provided, each treating the series as
//! a self-affine trace (fBm-like):
//!
//! * [`variogram_hurst`]: mean squared increment `V(w) ~ w^(2H)`;
//! * [`spectral_hurst`]: periodogram `P(f) ~ f^-(2H+1)` after removing the
//!   least-squares line;
//! * [`wavelet_hurst`]: Haar detail spread `sigma_j ~ 2^(j(H+1/2))`.
//!
//! Raw estimates outside `[0.01, 0.99]` are clamped and flagged. The fractal
//! dimension is always `2 - H`.

mod spectral;
mod variogram;
mod wavelet;

use core::fmt;

pub use spectral::{linear_detrend, spectral_hurst};
pub use variogram::{variogram_hurst, variogram_lags};
pub use wavelet::{haar_detail_levels, wavelet_hurst};

use crate::fit::LineFit;

/// Shortest series any estimator accepts.
pub const MIN_SERIES_LEN: usize = 64;
pub const HURST_FLOOR: f64 = 0.01;
pub const HURST_CEIL: f64 = 0.99;
/// Half-width of the band around 1/2 classified as uncorrelated.
pub const DEFAULT_PERSISTENCE_BAND: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Variogram,
    Spectral,
    Wavelet,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Variogram, Method::Spectral, Method::Wavelet];

    pub fn name(self) -> &'static str {
        match self {
            Method::Variogram => "variogram",
            Method::Spectral => "spectral",
            Method::Wavelet => "wavelet",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Persistence {
    Random,
    Persistent,
    Antipersistent,
}

impl Persistence {
    pub fn name(self) -> &'static str {
        match self {
            Persistence::Random => "random",
            Persistence::Persistent => "persistent",
            Persistence::Antipersistent => "antipersistent",
        }
    }
}

/// Window applied to the detrended series before the periodogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Taper {
    None,
    Hann,
}

impl Taper {
    pub fn name(self) -> &'static str {
        match self {
            Taper::None => "none",
            Taper::Hann => "hann",
        }
    }
}

/// Fit windows shared by the three estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitConfig {
    /// Smallest variogram lag, in samples.
    pub min_lag: usize,
    /// Largest variogram lag as a fraction of the series length.
    pub max_lag_fraction: f64,
    pub lags_per_octave: usize,
    /// First periodogram bin in the fit; DC is always excluded.
    pub spectral_low_cut: usize,
    /// Last fitted bin as a fraction of the Nyquist bin `N/2`.
    pub spectral_high_fraction: f64,
    pub spectral_taper: Taper,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            min_lag: 1,
            max_lag_fraction: 0.25,
            lags_per_octave: 8,
            spectral_low_cut: 1,
            spectral_high_fraction: 0.25,
            spectral_taper: Taper::Hann,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<(), EstimateError> {
        if self.min_lag < 1 {
            return Err(EstimateError::InvalidConfig("min_lag must be at least 1"));
        }
        if !(self.max_lag_fraction > 0.0 && self.max_lag_fraction <= 0.5) {
            return Err(EstimateError::InvalidConfig(
                "max_lag_fraction must lie in (0, 0.5]",
            ));
        }
        if self.lags_per_octave < 1 {
            return Err(EstimateError::InvalidConfig(
                "lags_per_octave must be at least 1",
            ));
        }
        if self.spectral_low_cut < 1 {
            return Err(EstimateError::InvalidConfig(
                "spectral_low_cut must be at least 1",
            ));
        }
        if !(self.spectral_high_fraction > 0.0 && self.spectral_high_fraction <= 1.0) {
            return Err(EstimateError::InvalidConfig(
                "spectral_high_fraction must lie in (0, 1]",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EstimateError {
    TooShort {
        len: usize,
        min: usize,
    },
    /// Constant input, or a fit quantity collapsed to zero.
    DegenerateSignal,
    NonFinite,
    OutOfRange(f64),
    InvalidConfig(&'static str),
}

impl fmt::Display for EstimateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EstimateError::TooShort { len, min } => {
                write!(f, "series too short: {len} samples, need at least {min}")
            }
            EstimateError::DegenerateSignal => {
                write!(f, "degenerate signal (no fluctuation to fit)")
            }
            EstimateError::NonFinite => write!(f, "series contains non-finite values"),
            EstimateError::OutOfRange(h) => write!(f, "value {h} outside the open interval (0, 1)"),
            EstimateError::InvalidConfig(msg) => write!(f, "invalid fit configuration: {msg}"),
        }
    }
}

impl core::error::Error for EstimateError {}

/// An estimator failure tagged with the method that raised it.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisError {
    pub method: Method,
    pub source: EstimateError,
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} estimator: {}", self.method, self.source)
    }
}

impl core::error::Error for AnalysisError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        Some(&self.source)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HurstEstimate {
    method: Method,
    hurst: f64,
    raw_hurst: f64,
    raw_slope: f64,
    intercept: f64,
    r_squared: f64,
    points_used: usize,
    clamped: bool,
}

impl HurstEstimate {
    /// Builds an estimate from a method's raw exponent and the log-log fit
    /// that produced it. The exponent is clamped to `[0.01, 0.99]`.
    pub fn new(method: Method, raw_hurst: f64, fit: LineFit) -> Self {
        let hurst = raw_hurst.clamp(HURST_FLOOR, HURST_CEIL);
        HurstEstimate {
            method,
            hurst,
            raw_hurst,
            raw_slope: fit.slope,
            intercept: fit.intercept,
            r_squared: fit.r_squared,
            points_used: fit.points,
            clamped: hurst != raw_hurst,
        }
    }

    /// An estimate carrying only an exponent, e.g. a published table value.
    pub fn from_hurst(method: Method, hurst: f64) -> Self {
        Self::new(
            method,
            hurst,
            LineFit {
                slope: f64::NAN,
                intercept: f64::NAN,
                r_squared: f64::NAN,
                points: 0,
            },
        )
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn hurst(&self) -> f64 {
        self.hurst
    }

    /// `2 - hurst`.
    pub fn dimension(&self) -> f64 {
        2.0 - self.hurst
    }

    /// The method's exponent before clamping.
    pub fn raw_hurst(&self) -> f64 {
        self.raw_hurst
    }

    /// Slope of the log-log fit, in the method's own units.
    pub fn raw_slope(&self) -> f64 {
        self.raw_slope
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn r_squared(&self) -> f64 {
        self.r_squared
    }

    pub fn points_used(&self) -> usize {
        self.points_used
    }

    pub fn clamped(&self) -> bool {
        self.clamped
    }
}

/// Three-method summary with the arithmetic mean exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisReport {
    estimates: [HurstEstimate; 3],
    mean_hurst: f64,
    persistence: Persistence,
}

impl AnalysisReport {
    /// Aggregates estimates given in variogram, spectral, wavelet order.
    pub fn from_estimates(estimates: [HurstEstimate; 3]) -> Self {
        let mean_hurst = (estimates[0].hurst + estimates[1].hurst + estimates[2].hurst) / 3.0;
        let persistence = classify_persistence(mean_hurst, DEFAULT_PERSISTENCE_BAND)
            .expect("clamped exponents average inside (0, 1)");
        AnalysisReport {
            estimates,
            mean_hurst,
            persistence,
        }
    }

    pub fn estimates(&self) -> &[HurstEstimate; 3] {
        &self.estimates
    }

    pub fn estimate(&self, method: Method) -> &HurstEstimate {
        &self.estimates[method as usize]
    }

    pub fn mean_hurst(&self) -> f64 {
        self.mean_hurst
    }

    pub fn mean_dimension(&self) -> f64 {
        2.0 - self.mean_hurst
    }

    pub fn persistence(&self) -> Persistence {
        self.persistence
    }
}

/// `D = 2 - H` for `H` strictly inside `(0, 1)`.
pub fn hurst_to_dimension(h: f64) -> Result<f64, EstimateError> {
    if !(h > 0.0 && h < 1.0) {
        return Err(EstimateError::OutOfRange(h));
    }
    Ok(2.0 - h)
}

pub fn classify_persistence(h: f64, band: f64) -> Result<Persistence, EstimateError> {
    if !(h > 0.0 && h < 1.0) {
        return Err(EstimateError::OutOfRange(h));
    }
    if band.is_nan() || band < 0.0 {
        return Err(EstimateError::InvalidConfig(
            "persistence band must be non-negative",
        ));
    }
    Ok(if crate::math::abs(h - 0.5) <= band {
        Persistence::Random
    } else if h > 0.5 {
        Persistence::Persistent
    } else {
        Persistence::Antipersistent
    })
}

/// Runs all three estimators and averages them.
pub fn analyze_all(series: &[f64], cfg: &FitConfig) -> Result<AnalysisReport, AnalysisError> {
    let tag = |method| move |source| AnalysisError { method, source };
    let v = variogram_hurst(series, cfg).map_err(tag(Method::Variogram))?;
    let s = spectral_hurst(series, cfg).map_err(tag(Method::Spectral))?;
    let w = wavelet_hurst(series, cfg).map_err(tag(Method::Wavelet))?;
    Ok(AnalysisReport::from_estimates([v, s, w]))
}

pub(crate) fn check_series(series: &[f64], cfg: &FitConfig) -> Result<(), EstimateError> {
    cfg.validate()?;
    if series.len() < MIN_SERIES_LEN {
        return Err(EstimateError::TooShort {
            len: series.len(),
            min: MIN_SERIES_LEN,
        });
    }
    if series.iter().any(|x| !x.is_finite()) {
        return Err(EstimateError::NonFinite);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round2(x: f64) -> f64 {
        crate::math::round(x * 100.0) / 100.0
    }

    #[test]
    fn dimension_substitution_spot_values() {
        assert_eq!(round2(hurst_to_dimension(0.62).unwrap()), 1.38);
        assert_eq!(round2(hurst_to_dimension(0.87).unwrap()), 1.13);
        assert_eq!(hurst_to_dimension(0.5).unwrap(), 1.5);
        assert!((hurst_to_dimension(0.62).unwrap() - 1.38).abs() < 1e-15);
        assert!((hurst_to_dimension(0.87).unwrap() - 1.13).abs() < 1e-15);
    }

    #[test]
    fn dimension_rejects_out_of_range() {
        for h in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(
                hurst_to_dimension(h),
                Err(EstimateError::OutOfRange(_))
            ));
        }
    }

    #[test]
    fn persistence_rule() {
        let c = |h| classify_persistence(h, DEFAULT_PERSISTENCE_BAND).unwrap();
        assert_eq!(c(0.50), Persistence::Random);
        assert_eq!(c(0.81), Persistence::Persistent);
        assert_eq!(c(0.30), Persistence::Antipersistent);
        assert_eq!(c(0.54), Persistence::Random);
        assert_eq!(c(0.56), Persistence::Persistent);
        assert_eq!(c(0.44), Persistence::Antipersistent);
        assert_eq!(
            classify_persistence(0.51, 0.0).unwrap(),
            Persistence::Persistent
        );
        assert!(classify_persistence(1.2, 0.05).is_err());
        assert!(classify_persistence(0.5, -1.0).is_err());
    }

    #[test]
    fn table_means_aggregate() {
        let report = |h: [f64; 3]| {
            AnalysisReport::from_estimates([
                HurstEstimate::from_hurst(Method::Variogram, h[0]),
                HurstEstimate::from_hurst(Method::Spectral, h[1]),
                HurstEstimate::from_hurst(Method::Wavelet, h[2]),
            ])
        };
        let union = report([0.71, 0.62, 0.76]);
        assert_eq!(round2(union.mean_hurst()), 0.70);
        assert_eq!(round2(union.mean_dimension()), 1.30);
        let inter = report([0.77, 0.80, 0.87]);
        assert_eq!(round2(inter.mean_hurst()), 0.81);
        assert_eq!(round2(inter.mean_dimension()), 1.19);
        assert_eq!(inter.persistence(), Persistence::Persistent);

        let flat = report([0.5, 0.5, 0.5]);
        assert_eq!(flat.mean_hurst(), 0.5);
        assert_eq!(flat.mean_dimension(), 1.5);
        assert_eq!(flat.persistence(), Persistence::Random);
        assert_eq!(flat.estimate(Method::Spectral).method(), Method::Spectral);
    }

    #[test]
    fn clamping_is_flagged() {
        let fit = LineFit {
            slope: 2.0,
            intercept: 0.0,
            r_squared: 1.0,
            points: 5,
        };
        let e = HurstEstimate::new(Method::Variogram, 1.0, fit);
        assert_eq!(e.hurst(), HURST_CEIL);
        assert!(e.clamped());
        assert_eq!(e.dimension(), 2.0 - e.hurst());
        let e = HurstEstimate::new(Method::Variogram, 0.4, fit);
        assert!(!e.clamped());
        let e = HurstEstimate::new(Method::Variogram, -0.5, fit);
        assert_eq!(e.hurst(), HURST_FLOOR);
        assert!(e.clamped());
    }

    #[test]
    fn config_validation() {
        assert!(FitConfig::default().validate().is_ok());
        let bad = FitConfig {
            max_lag_fraction: 0.6,
            ..FitConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = FitConfig {
            spectral_high_fraction: 0.0,
            ..FitConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = FitConfig {
            min_lag: 0,
            ..FitConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn analyze_all_tags_failing_method() {
        let series = [0.25; 128];
        let err = analyze_all(&series, &FitConfig::default()).unwrap_err();
        assert_eq!(err.method, Method::Variogram);
        assert_eq!(err.source, EstimateError::DegenerateSignal);
    }
}
