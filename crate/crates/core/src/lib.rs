//! Pure algorithmic core of `soundset`.
//!
//! Everything here works on in-memory sample series and needs only `alloc`:
//! gesture set algebra on a sequencer timeline, the three Hurst exponent
//! estimators (variogram, power spectrum, Haar wavelet), deterministic
//! signal synthesis including exact fractional Brownian motion, delay
//! embedding and recurrence matrices, and elementary cellular automata
//! driving a trigger grid.
//!
//! File formats, the CLI and anything touching the filesystem live in the
//! `soundset` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod buffer;
pub mod estimators;
pub mod fft;
pub mod fit;
pub mod grid;
mod math;
pub mod recurrence;
pub mod synthesis;

pub use algebra::{
    fuzzy_combine, intersect_overlay, is_almost_disjoint, negate_support, render_timeline,
    support_mask, union_adjacent, AlgebraError, AlmostDisjointVerdict, FuzzyMode, Gesture,
    Placement, SupportMask, Timeline,
};
pub use buffer::{downmix_mono, BufferError, SampleBuffer};
pub use estimators::{
    analyze_all, classify_persistence, hurst_to_dimension, linear_detrend, spectral_hurst,
    variogram_hurst, wavelet_hurst, AnalysisError, AnalysisReport, EstimateError, FitConfig,
    HurstEstimate, Method, Persistence, Taper,
};
pub use grid::{ca_evolve, ca_step, grid_to_timeline, CaRule, GridError, GridSpec};
pub use recurrence::{
    decimate, delay_embed, distance_matrix, recurrence_rate, threshold_recurrence, DistanceMatrix,
    Embedding, EmbeddingConfig, EpsilonMode, RecurrenceError, RecurrenceMatrix, MAX_POINTS,
};
pub use synthesis::{
    gen_burst_fixture, gen_fbm, gen_sine, gen_white_noise, FbmPath, FbmSpec, SynthError,
};
