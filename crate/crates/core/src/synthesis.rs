//! Deterministic synthetic signals.
//!
//! All randomness comes from `ChaCha20Rng::seed_from_u64(seed)` with
//! standard-normal draws from `rand_distr::StandardNormal`, consumed in
//! order. A new generator is created for every call.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::Gesture;
use crate::buffer::SampleBuffer;
use crate::fft::{fft, fft_real, Complex64};
use crate::math;

/// Sample rate given to synthetic fixtures.
pub const FIXTURE_RATE_HZ: u32 = 44_100;
/// Peak amplitude of [`gen_burst_fixture`] output.
pub const BURST_PEAK: f64 = 0.9;

#[derive(Debug, Clone, PartialEq)]
pub enum SynthError {
    InvalidHurst(f64),
    TooShort {
        len: usize,
        min: usize,
    },
    /// Frequency not strictly between 0 and Nyquist.
    AliasedFrequency {
        freq_hz: f64,
        rate_hz: u32,
    },
    InvalidAmplitude(f64),
    InvalidDecay(f64),
}

impl fmt::Display for SynthError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SynthError::InvalidHurst(h) => write!(f, "hurst exponent {h} outside (0, 1)"),
            SynthError::TooShort { len, min } => write!(f, "length {len} below minimum {min}"),
            SynthError::AliasedFrequency { freq_hz, rate_hz } => {
                write!(
                    f,
                    "frequency {freq_hz} Hz outside (0, Nyquist) for {rate_hz} Hz"
                )
            }
            SynthError::InvalidAmplitude(a) => write!(f, "amplitude {a} outside (0, 1]"),
            SynthError::InvalidDecay(d) => write!(f, "decay {d} must be positive"),
        }
    }
}

impl core::error::Error for SynthError {}

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn gen_white_noise(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng(seed);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FbmSpec {
    pub hurst: f64,
    pub length: usize,
    pub seed: u64,
}

impl FbmSpec {
    pub fn validate(&self) -> Result<(), SynthError> {
        if !(self.hurst > 0.0 && self.hurst < 1.0) {
            return Err(SynthError::InvalidHurst(self.hurst));
        }
        if self.length < 2 {
            return Err(SynthError::TooShort {
                len: self.length,
                min: 2,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FbmPath {
    pub values: Vec<f64>,
    /// False when the circulant embedding had negative eigenvalues that were
    /// clipped to zero, making the covariance approximate.
    pub exact: bool,
}

/// Autocovariance of unit-variance fractional Gaussian noise at lag `k`.
pub fn fgn_autocovariance(hurst: f64, k: usize) -> f64 {
    let k = k as f64;
    let two_h = 2.0 * hurst;
    0.5 * (math::powf(k + 1.0, two_h) - 2.0 * math::powf(k, two_h)
        + math::powf(math::abs(k - 1.0), two_h))
}

/// Fractional Brownian motion of `length` samples: circulant-embedded fGn
/// increments, cumulatively summed. `H = 0.5` is the plain random walk over
/// [`gen_white_noise`] with the same seed.
pub fn gen_fbm(spec: &FbmSpec) -> Result<FbmPath, SynthError> {
    spec.validate()?;
    let n = spec.length;
    let increments = if spec.hurst == 0.5 {
        (gen_white_noise(n, spec.seed), true)
    } else {
        fgn_circulant(spec.hurst, n, spec.seed)
    };
    let (mut values, exact) = increments;
    let mut acc = 0.0;
    for v in values.iter_mut() {
        acc += *v;
        *v = acc;
    }
    Ok(FbmPath { values, exact })
}

fn fgn_circulant(hurst: f64, n: usize, seed: u64) -> (Vec<f64>, bool) {
    let m = 2 * n;
    let mut row = vec![0.0; m];
    for (k, r) in row.iter_mut().enumerate().take(n + 1) {
        *r = fgn_autocovariance(hurst, k);
    }
    for k in 1..n {
        row[m - k] = row[k];
    }
    let eigen = fft_real(&row);
    let largest = eigen.iter().fold(0.0f64, |a, c| a.max(c.re));
    let mut exact = true;
    let scales: Vec<f64> = eigen
        .iter()
        .map(|c| {
            let lambda = c.re;
            if lambda < 0.0 {
                // round-off negatives are expected; anything larger is a real failure
                if lambda < -1e-10 * largest {
                    exact = false;
                }
                0.0
            } else {
                math::sqrt(lambda / m as f64)
            }
        })
        .collect();

    let mut rng = rng(seed);
    let mut spectrum: Vec<Complex64> = scales
        .iter()
        .map(|&s| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re * s, im * s)
        })
        .collect();
    fft(&mut spectrum);
    (spectrum[..n].iter().map(|c| c.re).collect(), exact)
}

/// `amplitude * sin(2 pi freq t / rate)` for `t = 0..n`.
pub fn gen_sine(
    freq_hz: f64,
    n: usize,
    rate_hz: u32,
    amplitude: f64,
) -> Result<Vec<f64>, SynthError> {
    if !(freq_hz > 0.0 && freq_hz < rate_hz as f64 / 2.0) {
        return Err(SynthError::AliasedFrequency { freq_hz, rate_hz });
    }
    if !(amplitude > 0.0 && amplitude <= 1.0) {
        return Err(SynthError::InvalidAmplitude(amplitude));
    }
    let w = 2.0 * PI * freq_hz / rate_hz as f64;
    Ok((0..n)
        .map(|t| amplitude * math::sin(w * t as f64))
        .collect())
}

/// `exp(-decay * t / n)`.
pub fn burst_envelope(t: usize, n: usize, decay: f64) -> f64 {
    math::exp(-decay * t as f64 / n as f64)
}

/// Percussive fixture: white noise under an exponential decay, scaled so the
/// largest magnitude is exactly [`BURST_PEAK`]. Mono at [`FIXTURE_RATE_HZ`].
pub fn gen_burst_fixture(n: usize, seed: u64, decay: f64) -> Result<Gesture, SynthError> {
    if n < 64 {
        return Err(SynthError::TooShort { len: n, min: 64 });
    }
    if !(decay > 0.0 && decay.is_finite()) {
        return Err(SynthError::InvalidDecay(decay));
    }
    let mut samples: Vec<f64> = gen_white_noise(n, seed)
        .into_iter()
        .enumerate()
        .map(|(t, x)| x * burst_envelope(t, n, decay))
        .collect();
    let (peak_at, peak) = samples
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |(i, m), (j, &x)| {
            if math::abs(x) > m {
                (j, math::abs(x))
            } else {
                (i, m)
            }
        });
    let gain = BURST_PEAK / peak;
    for x in samples.iter_mut() {
        *x *= gain;
    }
    samples[peak_at] = if samples[peak_at] < 0.0 {
        -BURST_PEAK
    } else {
        BURST_PEAK
    };
    let buffer = SampleBuffer::mono(FIXTURE_RATE_HZ, samples).expect("fixture rate is positive");
    Ok(Gesture::new(String::from("burst"), buffer).expect("fixture is mono and non-empty"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn white_noise_is_deterministic_and_seeded() {
        assert_eq!(gen_white_noise(8, 42), gen_white_noise(8, 42));
        assert_ne!(gen_white_noise(8, 1), gen_white_noise(8, 2));
    }

    #[test]
    fn white_noise_moments() {
        let x = gen_white_noise(100_000, 9);
        let n = x.len() as f64;
        let mean = x.iter().sum::<f64>() / n;
        let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        assert!(mean.abs() < 0.02, "{mean}");
        assert!((var - 1.0).abs() < 0.05, "{var}");
    }

    #[test]
    fn fbm_half_is_random_walk() {
        let spec = FbmSpec {
            hurst: 0.5,
            length: 256,
            seed: 11,
        };
        let path = gen_fbm(&spec).unwrap();
        let mut acc = 0.0;
        let walk: Vec<f64> = gen_white_noise(256, 11)
            .into_iter()
            .map(|x| {
                acc += x;
                acc
            })
            .collect();
        assert_eq!(path.values, walk);
        assert!(path.exact);
    }

    #[test]
    fn fbm_rejects_bad_specs() {
        for h in [0.0, 1.0, -0.3, f64::NAN] {
            let spec = FbmSpec {
                hurst: h,
                length: 16,
                seed: 0,
            };
            assert!(matches!(gen_fbm(&spec), Err(SynthError::InvalidHurst(_))));
        }
        let spec = FbmSpec {
            hurst: 0.3,
            length: 1,
            seed: 0,
        };
        assert!(matches!(gen_fbm(&spec), Err(SynthError::TooShort { .. })));
    }

    #[test]
    fn fbm_is_deterministic_and_exact() {
        for h in [0.1, 0.3, 0.7, 0.95] {
            let spec = FbmSpec {
                hurst: h,
                length: 1000,
                seed: 5,
            };
            let a = gen_fbm(&spec).unwrap();
            assert_eq!(a, gen_fbm(&spec).unwrap());
            assert!(a.exact, "H={h}");
            assert_eq!(a.values.len(), 1000);
        }
    }

    #[test]
    fn autocovariance_at_half_vanishes_off_zero() {
        assert_eq!(fgn_autocovariance(0.5, 0), 1.0);
        for k in 1..10 {
            assert!(fgn_autocovariance(0.5, k).abs() < 1e-15);
        }
    }

    #[test]
    fn sine_basics() {
        let s = gen_sine(441.0, 1000, 44_100, 1.0).unwrap();
        assert_eq!(s[0], 0.0);
        // 100 samples per period: sample 100 returns to phase zero
        assert!(s[100].abs() < 1e-6);
        let half = gen_sine(441.0, 1000, 44_100, 0.5).unwrap();
        assert!(half.iter().all(|x| x.abs() <= 0.5));
        assert!(matches!(
            gen_sine(22_050.0, 10, 44_100, 1.0),
            Err(SynthError::AliasedFrequency { .. })
        ));
        assert!(matches!(
            gen_sine(0.0, 10, 44_100, 1.0),
            Err(SynthError::AliasedFrequency { .. })
        ));
        assert!(matches!(
            gen_sine(10.0, 10, 44_100, 1.5),
            Err(SynthError::InvalidAmplitude(_))
        ));
    }

    #[test]
    fn burst_fixture_construction() {
        let g = gen_burst_fixture(4096, 7, 5.0).unwrap();
        let s = g.buffer().samples();
        assert_eq!(s.len(), 4096);
        assert!(s[0].abs() <= BURST_PEAK);
        assert_eq!(g.buffer().peak(), BURST_PEAK);
        assert_eq!(g, gen_burst_fixture(4096, 7, 5.0).unwrap());
        assert!((1..4096).all(|t| burst_envelope(t, 4096, 5.0) < burst_envelope(t - 1, 4096, 5.0)));
        assert!(gen_burst_fixture(32, 7, 5.0).is_err());
        assert!(gen_burst_fixture(128, 7, 0.0).is_err());
    }
}
