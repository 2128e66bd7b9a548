//! Delay embedding and recurrence matrices.
//!
//! Both matrix types store only the strict upper triangle, so symmetry is
//! structural and the diagonal (distance 0, always recurrent) is implicit.

use alloc::vec::Vec;
use core::fmt;

use crate::math;

/// Largest embedding accepted by [`distance_matrix`]; the condensed matrix
/// holds `M(M-1)/2` distances.
pub const MAX_POINTS: usize = 8192;

#[derive(Debug, Clone, PartialEq)]
pub enum RecurrenceError {
    SeriesTooShort { len: usize, needed: usize },
    InvalidEmbedding,
    EmptyEmbedding,
    TooManyPoints { points: usize, max: usize },
    InvalidEpsilon(f64),
    InvalidDecimation,
}

impl fmt::Display for RecurrenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecurrenceError::SeriesTooShort { len, needed } => {
                write!(
                    f,
                    "series of {len} samples too short for embedding span {needed}"
                )
            }
            RecurrenceError::InvalidEmbedding => {
                write!(f, "embedding dimension and delay must be at least 1")
            }
            RecurrenceError::EmptyEmbedding => write!(f, "no embedded vectors"),
            RecurrenceError::TooManyPoints { points, max } => {
                write!(
                    f,
                    "{points} embedded points exceed the limit of {max}; decimate first"
                )
            }
            RecurrenceError::InvalidEpsilon(e) => write!(f, "invalid recurrence threshold {e}"),
            RecurrenceError::InvalidDecimation => write!(f, "decimation factor must be at least 1"),
        }
    }
}

impl core::error::Error for RecurrenceError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingConfig {
    /// Embedding dimension `m`.
    pub dimension: usize,
    /// Delay `tau`, in samples.
    pub delay: usize,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        EmbeddingConfig {
            dimension: 2,
            delay: 1,
        }
    }
}

/// `M` delay vectors of `dimension` coordinates, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    dimension: usize,
    coords: Vec<f64>,
}

impl Embedding {
    pub fn len(&self) -> usize {
        self.coords.len() / self.dimension
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dimension..(i + 1) * self.dimension]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dimension)
    }
}

/// Vector `i` is `(x[i], x[i+tau], ..., x[i+(m-1)tau])`.
pub fn delay_embed(series: &[f64], cfg: &EmbeddingConfig) -> Result<Embedding, RecurrenceError> {
    if cfg.dimension == 0 || cfg.delay == 0 {
        return Err(RecurrenceError::InvalidEmbedding);
    }
    let span = (cfg.dimension - 1) * cfg.delay;
    if span >= series.len() {
        return Err(RecurrenceError::SeriesTooShort {
            len: series.len(),
            needed: span + 1,
        });
    }
    let count = series.len() - span;
    let mut coords = Vec::with_capacity(count * cfg.dimension);
    for i in 0..count {
        coords.extend((0..cfg.dimension).map(|k| series[i + k * cfg.delay]));
    }
    Ok(Embedding {
        dimension: cfg.dimension,
        coords,
    })
}

/// Every `factor`-th sample, starting with the first.
pub fn decimate(series: &[f64], factor: usize) -> Result<Vec<f64>, RecurrenceError> {
    if factor == 0 {
        return Err(RecurrenceError::InvalidDecimation);
    }
    Ok(series.iter().step_by(factor).copied().collect())
}

#[inline]
fn condensed_index(size: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < size);
    i * size - i * (i + 1) / 2 + (j - i - 1)
}

/// Pairwise Euclidean distances between embedded vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    size: usize,
    upper: Vec<f64>,
}

impl DistanceMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            core::cmp::Ordering::Equal => 0.0,
            core::cmp::Ordering::Less => self.upper[condensed_index(self.size, i, j)],
            core::cmp::Ordering::Greater => self.upper[condensed_index(self.size, j, i)],
        }
    }

    /// Off-diagonal distances, pairs `(i, j)` with `i < j` in row order.
    pub fn off_diagonal(&self) -> &[f64] {
        &self.upper
    }

    pub fn max(&self) -> f64 {
        self.upper.iter().copied().fold(0.0, f64::max)
    }
}

pub fn distance_matrix(vectors: &Embedding) -> Result<DistanceMatrix, RecurrenceError> {
    let size = vectors.len();
    if size == 0 {
        return Err(RecurrenceError::EmptyEmbedding);
    }
    if size > MAX_POINTS {
        return Err(RecurrenceError::TooManyPoints {
            points: size,
            max: MAX_POINTS,
        });
    }
    let mut upper = Vec::with_capacity(size * (size - 1) / 2);
    for i in 0..size {
        let vi = vectors.vector(i);
        for j in i + 1..size {
            let sq: f64 = vi
                .iter()
                .zip(vectors.vector(j))
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            upper.push(math::sqrt(sq));
        }
    }
    Ok(DistanceMatrix { size, upper })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsilonMode {
    Fixed(f64),
    /// Pick the threshold so this fraction of off-diagonal pairs recur.
    Rate(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceMatrix {
    size: usize,
    epsilon: f64,
    upper: Vec<bool>,
}

impl RecurrenceMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        match i.cmp(&j) {
            core::cmp::Ordering::Equal => true,
            core::cmp::Ordering::Less => self.upper[condensed_index(self.size, i, j)],
            core::cmp::Ordering::Greater => self.upper[condensed_index(self.size, j, i)],
        }
    }

    pub fn off_diagonal(&self) -> &[bool] {
        &self.upper
    }
}

/// Marks pairs at distance `<= epsilon`.
pub fn threshold_recurrence(
    d: &DistanceMatrix,
    mode: EpsilonMode,
) -> Result<RecurrenceMatrix, RecurrenceError> {
    let epsilon = match mode {
        EpsilonMode::Fixed(e) => {
            if e.is_nan() || e < 0.0 {
                return Err(RecurrenceError::InvalidEpsilon(e));
            }
            e
        }
        EpsilonMode::Rate(rho) => {
            if !(rho > 0.0 && rho <= 1.0) {
                return Err(RecurrenceError::InvalidEpsilon(rho));
            }
            rate_quantile(&d.upper, rho)
        }
    };
    Ok(RecurrenceMatrix {
        size: d.size,
        epsilon,
        upper: d.upper.iter().map(|&x| x <= epsilon).collect(),
    })
}

/// The `ceil(rho * P)`-th smallest of `P` distances (0 when there are none).
fn rate_quantile(distances: &[f64], rho: f64) -> f64 {
    if distances.is_empty() {
        return 0.0;
    }
    let rank = (math::ceil(rho * distances.len() as f64) as usize).clamp(1, distances.len());
    let mut scratch = distances.to_vec();
    let (_, nth, _) = scratch.select_nth_unstable_by(rank - 1, f64::total_cmp);
    *nth
}

/// Fraction of recurrent off-diagonal pairs; 0 for a single point.
pub fn recurrence_rate(r: &RecurrenceMatrix) -> f64 {
    if r.upper.is_empty() {
        return 0.0;
    }
    r.upper.iter().filter(|&&b| b).count() as f64 / r.upper.len() as f64
}
