//! Planar PCM sample buffers.

use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BufferError {
    ZeroRate,
    /// Only mono and stereo are supported.
    ChannelCount(usize),
    ChannelLengthMismatch,
}

impl fmt::Display for BufferError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BufferError::ZeroRate => write!(f, "sample rate must be positive"),
            BufferError::ChannelCount(n) => {
                write!(f, "unsupported channel count {n} (expected 1 or 2)")
            }
            BufferError::ChannelLengthMismatch => write!(f, "channels have different lengths"),
        }
    }
}

impl core::error::Error for BufferError {}

/// Audio as real amplitudes, one `Vec` per channel.
///
/// Decoded audio lies in `[-1, 1]`; buffers built from synthetic series may
/// exceed that range and are clamped when quantized.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBuffer {
    rate_hz: u32,
    channels: Vec<Vec<f64>>,
}

impl SampleBuffer {
    pub fn new(rate_hz: u32, channels: Vec<Vec<f64>>) -> Result<Self, BufferError> {
        if rate_hz == 0 {
            return Err(BufferError::ZeroRate);
        }
        if channels.is_empty() || channels.len() > 2 {
            return Err(BufferError::ChannelCount(channels.len()));
        }
        if channels.iter().any(|c| c.len() != channels[0].len()) {
            return Err(BufferError::ChannelLengthMismatch);
        }
        Ok(SampleBuffer { rate_hz, channels })
    }

    pub fn mono(rate_hz: u32, samples: Vec<f64>) -> Result<Self, BufferError> {
        Self::new(rate_hz, alloc::vec![samples])
    }

    pub fn rate_hz(&self) -> u32 {
        self.rate_hz
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    pub fn is_mono(&self) -> bool {
        self.channels.len() == 1
    }

    /// Frames per channel.
    pub fn len(&self) -> usize {
        self.channels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn channel(&self, index: usize) -> &[f64] {
        &self.channels[index]
    }

    pub fn channels(&self) -> &[Vec<f64>] {
        &self.channels
    }

    /// First channel; the whole signal for mono buffers.
    pub fn samples(&self) -> &[f64] {
        &self.channels[0]
    }

    pub fn into_channels(self) -> Vec<Vec<f64>> {
        self.channels
    }

    /// Largest absolute amplitude over all channels, 0 for empty buffers.
    pub fn peak(&self) -> f64 {
        self.channels
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, &x| {
                if crate::math::abs(x) > m {
                    crate::math::abs(x)
                } else {
                    m
                }
            })
    }
}

/// Collapses stereo to mono by averaging the channels; mono passes through.
pub fn downmix_mono(buf: &SampleBuffer) -> SampleBuffer {
    if buf.is_mono() {
        return buf.clone();
    }
    let (l, r) = (buf.channel(0), buf.channel(1));
    let mixed = l.iter().zip(r).map(|(&a, &b)| (a + b) / 2.0).collect();
    SampleBuffer {
        rate_hz: buf.rate_hz,
        channels: alloc::vec![mixed],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn downmix_averages_channels() {
        let b = SampleBuffer::new(8000, vec![vec![1.0, 0.25], vec![0.0, 0.25]]).unwrap();
        let m = downmix_mono(&b);
        assert!(m.is_mono());
        assert_eq!(m.samples(), &[0.5, 0.25]);
    }

    #[test]
    fn downmix_mono_is_identity() {
        let b = SampleBuffer::mono(8000, vec![0.1, -0.2, 0.3]).unwrap();
        assert_eq!(downmix_mono(&b), b);
    }

    #[test]
    fn constructor_rejects_bad_shapes() {
        assert_eq!(SampleBuffer::mono(0, vec![0.0]), Err(BufferError::ZeroRate));
        assert_eq!(
            SampleBuffer::new(1, vec![]),
            Err(BufferError::ChannelCount(0))
        );
        assert_eq!(
            SampleBuffer::new(1, vec![vec![0.0]; 3]),
            Err(BufferError::ChannelCount(3))
        );
        assert_eq!(
            SampleBuffer::new(1, vec![vec![0.0], vec![]]),
            Err(BufferError::ChannelLengthMismatch)
        );
    }
}
