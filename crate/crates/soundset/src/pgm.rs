//! Binary greyscale PGM (P5) renderings of distance and recurrence matrices.
//!
//! Row 0 is the top scan line. Distances map to `255 * (1 - d / d_max)`, so
//! close pairs are bright; recurrent pairs are white and the rest black.

use soundset_core::{DistanceMatrix, RecurrenceMatrix};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PgmError {
    #[error("cannot write {}: {source}", path.display())]
    IoFailure {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy)]
pub enum Image<'a> {
    Distance(&'a DistanceMatrix),
    Recurrence(&'a RecurrenceMatrix),
}

fn encode(size: usize, pixel: impl Fn(usize, usize) -> u8) -> Vec<u8> {
    let header = format!("P5\n{size} {size}\n255\n");
    let mut out = Vec::with_capacity(header.len() + size * size);
    out.extend_from_slice(header.as_bytes());
    for i in 0..size {
        for j in 0..size {
            out.push(pixel(i, j));
        }
    }
    out
}

pub fn distance_pgm(d: &DistanceMatrix) -> Vec<u8> {
    let max = d.max();
    encode(d.size(), |i, j| {
        if max == 0.0 {
            255
        } else {
            (255.0 * (1.0 - d.get(i, j) / max)).round() as u8
        }
    })
}

pub fn recurrence_pgm(r: &RecurrenceMatrix) -> Vec<u8> {
    encode(r.size(), |i, j| if r.get(i, j) { 255 } else { 0 })
}

impl Image<'_> {
    pub fn to_pgm(self) -> Vec<u8> {
        match self {
            Image::Distance(d) => distance_pgm(d),
            Image::Recurrence(r) => recurrence_pgm(r),
        }
    }
}

pub fn export_image(image: Image<'_>, path: &Path) -> Result<(), PgmError> {
    std::fs::write(path, image.to_pgm()).map_err(|source| PgmError::IoFailure {
        path: path.to_path_buf(),
        source,
    })
}
