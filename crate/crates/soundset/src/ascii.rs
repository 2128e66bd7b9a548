//! One-amplitude-per-line text series.

use soundset_core::SampleBuffer;
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AsciiError {
    #[error("ASCII export needs a mono buffer, got {0} channels")]
    NotMono(usize),
    #[error("line {line}: '{text}' is not a finite number")]
    BadValue { line: usize, text: String },
}

/// Six decimal places per line, newline terminated.
pub fn to_ascii_text(buf: &SampleBuffer) -> Result<String, AsciiError> {
    if !buf.is_mono() {
        return Err(AsciiError::NotMono(buf.channel_count()));
    }
    Ok(format_series(buf.samples()))
}

pub fn format_series(samples: &[f64]) -> String {
    let mut out = String::with_capacity(samples.len() * 10);
    for x in samples {
        writeln!(out, "{x:.6}").expect("writing to a String cannot fail");
    }
    out
}

/// Reads a series back; blank lines and `#` comments are skipped, and the
/// values are not range checked.
pub fn parse_ascii(text: &str) -> Result<Vec<f64>, AsciiError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        match t.parse::<f64>() {
            Ok(x) if x.is_finite() => out.push(x),
            _ => {
                return Err(AsciiError::BadValue {
                    line: i + 1,
                    text: t.to_string(),
                })
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format() {
        let buf = SampleBuffer::mono(8000, vec![0.0, 0.5]).unwrap();
        assert_eq!(to_ascii_text(&buf).unwrap(), "0.000000\n0.500000\n");
        assert_eq!(format_series(&[]), "");
        assert_eq!(format_series(&[-1.0, 1.0 / 3.0]), "-1.000000\n0.333333\n");
    }

    #[test]
    fn line_count_matches() {
        let buf = SampleBuffer::mono(
            8000,
            (0..1000).map(|t| (t as f64 / 999.0) * 2.0 - 1.0).collect(),
        )
        .unwrap();
        assert_eq!(to_ascii_text(&buf).unwrap().lines().count(), 1000);
    }

    #[test]
    fn stereo_rejected() {
        let buf = SampleBuffer::new(8000, vec![vec![0.0], vec![0.0]]).unwrap();
        assert_eq!(to_ascii_text(&buf), Err(AsciiError::NotMono(2)));
    }

    #[test]
    fn parse_back() {
        assert_eq!(
            parse_ascii("# header\n0.25\n\n -1.5 \n").unwrap(),
            vec![0.25, -1.5]
        );
        assert_eq!(
            parse_ascii("1\nnan\n"),
            Err(AsciiError::BadValue {
                line: 2,
                text: "nan".into()
            })
        );
    }
}
