//! RIFF/WAVE PCM decoding and encoding (8-bit unsigned and 16-bit signed,
//! mono or stereo, little-endian).
//!
//! 16-bit samples map to `s / 32768`, 8-bit to `(s - 128) / 128`. Encoding
//! inverts that with round-half-away-from-zero and clamps to the integer
//! range, so decode followed by encode reproduces the data chunk exactly.

use soundset_core::SampleBuffer;
use thiserror::Error;

const FORMAT_PCM: u16 = 1;
const FORMAT_EXTENSIBLE: u16 = 0xFFFE;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WavError {
    #[error("malformed RIFF/WAVE container: {0}")]
    MalformedContainer(&'static str),
    #[error("unsupported WAV format: {0}")]
    UnsupportedFormat(String),
    #[error("buffer has {buffer} channels but the PCM spec declares {spec}")]
    ChannelMismatch { buffer: usize, spec: u16 },
}

/// Encoding parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PcmSpec {
    bit_depth: u16,
    rate_hz: u32,
    channels: u16,
}

impl PcmSpec {
    pub fn new(bit_depth: u16, rate_hz: u32, channels: u16) -> Result<Self, WavError> {
        if bit_depth != 8 && bit_depth != 16 {
            return Err(WavError::UnsupportedFormat(format!(
                "bit depth {bit_depth}"
            )));
        }
        if rate_hz == 0 {
            return Err(WavError::UnsupportedFormat("sample rate 0".into()));
        }
        if channels == 0 || channels > 2 {
            return Err(WavError::UnsupportedFormat(format!("{channels} channels")));
        }
        Ok(PcmSpec {
            bit_depth,
            rate_hz,
            channels,
        })
    }

    /// 16-bit at the buffer's own rate and channel count.
    pub fn cd_like(buf: &SampleBuffer) -> Self {
        PcmSpec {
            bit_depth: 16,
            rate_hz: buf.rate_hz(),
            channels: buf.channel_count() as u16,
        }
    }

    pub fn bit_depth(&self) -> u16 {
        self.bit_depth
    }

    pub fn rate_hz(&self) -> u32 {
        self.rate_hz
    }

    pub fn channels(&self) -> u16 {
        self.channels
    }

    fn block_align(&self) -> u16 {
        self.channels * self.bit_depth / 8
    }
}

struct Chunks<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Iterator for Chunks<'a> {
    type Item = Result<(&'a [u8], &'a [u8]), WavError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.pos + 8 > self.bytes.len() {
            return None;
        }
        let id = &self.bytes[self.pos..self.pos + 4];
        let size = u32_le(&self.bytes[self.pos + 4..]) as usize;
        let start = self.pos + 8;
        let Some(end) = start.checked_add(size).filter(|&e| e <= self.bytes.len()) else {
            self.pos = self.bytes.len();
            return Some(Err(WavError::MalformedContainer(
                "chunk extends past end of file",
            )));
        };
        // chunks are word aligned
        self.pos = end + (size & 1);
        Some(Ok((id, &self.bytes[start..end])))
    }
}

fn u16_le(b: &[u8]) -> u16 {
    u16::from_le_bytes([b[0], b[1]])
}

fn u32_le(b: &[u8]) -> u32 {
    u32::from_le_bytes([b[0], b[1], b[2], b[3]])
}

fn chunks(bytes: &[u8]) -> Result<Chunks<'_>, WavError> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(WavError::MalformedContainer("missing RIFF/WAVE magic"));
    }
    Ok(Chunks { bytes, pos: 12 })
}

fn parse_fmt(body: &[u8]) -> Result<PcmSpec, WavError> {
    if body.len() < 16 {
        return Err(WavError::MalformedContainer(
            "fmt chunk shorter than 16 bytes",
        ));
    }
    let tag = u16_le(body);
    let channels = u16_le(&body[2..]);
    let rate = u32_le(&body[4..]);
    let block_align = u16_le(&body[12..]);
    let bits = u16_le(&body[14..]);
    let is_pcm = match tag {
        FORMAT_PCM => true,
        // the sub-format GUID starts with the format tag
        FORMAT_EXTENSIBLE => body.len() >= 26 && u16_le(&body[24..]) == FORMAT_PCM,
        _ => false,
    };
    if !is_pcm {
        return Err(WavError::UnsupportedFormat(format!("codec tag {tag:#06x}")));
    }
    let spec = PcmSpec::new(bits, rate, channels)?;
    if block_align != spec.block_align() {
        return Err(WavError::MalformedContainer(
            "block align disagrees with channels and bit depth",
        ));
    }
    Ok(spec)
}

/// Locates the `fmt ` and `data` chunks; chunks after `data` are not read.
fn locate(bytes: &[u8]) -> Result<(PcmSpec, &[u8]), WavError> {
    let mut spec = None;
    for chunk in chunks(bytes)? {
        let (id, body) = chunk?;
        match id {
            b"fmt " => spec = Some(parse_fmt(body)?),
            b"data" => {
                let spec =
                    spec.ok_or(WavError::MalformedContainer("data chunk before fmt chunk"))?;
                return Ok((spec, body));
            }
            _ => {}
        }
    }
    Err(WavError::MalformedContainer(if spec.is_some() {
        "no data chunk"
    } else {
        "no fmt chunk"
    }))
}

/// Raw bytes of the `data` chunk.
pub fn data_chunk(bytes: &[u8]) -> Result<&[u8], WavError> {
    locate(bytes).map(|(_, data)| data)
}

pub fn read_wav(bytes: &[u8]) -> Result<SampleBuffer, WavError> {
    let (spec, data) = locate(bytes)?;
    let align = spec.block_align() as usize;
    if data.len() % align != 0 {
        return Err(WavError::MalformedContainer("data chunk ends mid-frame"));
    }
    let ch = spec.channels as usize;
    let frames = data.len() / align;
    let mut channels = vec![Vec::with_capacity(frames); ch];
    for frame in data.chunks_exact(align) {
        for (c, out) in channels.iter_mut().enumerate() {
            let x = match spec.bit_depth {
                8 => (frame[c] as f64 - 128.0) / 128.0,
                _ => i16::from_le_bytes([frame[2 * c], frame[2 * c + 1]]) as f64 / 32768.0,
            };
            out.push(x);
        }
    }
    SampleBuffer::new(spec.rate_hz, channels)
        .map_err(|_| WavError::MalformedContainer("inconsistent channel layout"))
}

fn quantize_16(x: f64) -> i16 {
    (x * 32768.0)
        .round()
        .clamp(i16::MIN as f64, i16::MAX as f64) as i16
}

fn quantize_8(x: f64) -> u8 {
    ((x * 128.0).round() + 128.0).clamp(0.0, 255.0) as u8
}

pub fn write_wav(buf: &SampleBuffer, spec: &PcmSpec) -> Result<Vec<u8>, WavError> {
    if buf.channel_count() != spec.channels as usize {
        return Err(WavError::ChannelMismatch {
            buffer: buf.channel_count(),
            spec: spec.channels,
        });
    }
    let align = spec.block_align() as u32;
    let data_len = buf.len() as u32 * align;
    let mut out = Vec::with_capacity(44 + data_len as usize + 1);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len + (data_len & 1)).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&FORMAT_PCM.to_le_bytes());
    out.extend_from_slice(&spec.channels.to_le_bytes());
    out.extend_from_slice(&spec.rate_hz.to_le_bytes());
    out.extend_from_slice(&(spec.rate_hz * align).to_le_bytes());
    out.extend_from_slice(&(align as u16).to_le_bytes());
    out.extend_from_slice(&spec.bit_depth.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for i in 0..buf.len() {
        for ch in buf.channels() {
            match spec.bit_depth {
                8 => out.push(quantize_8(ch[i])),
                _ => out.extend_from_slice(&quantize_16(ch[i]).to_le_bytes()),
            }
        }
    }
    if data_len & 1 == 1 {
        out.push(0);
    }
    Ok(out)
}
