//! Timeline documents: a gesture table of WAV files plus placements.
//!
//! ```json
//! {"rate_hz": 44100, "length": 88200,
//!  "gestures": [{"id": "kick", "file": "kick.wav"}],
//!  "placements": [{"gesture_id": "kick", "row": 0, "start": 0}]}
//! ```
//!
//! Gesture files are resolved against the directory holding the document.
//! Stereo files are downmixed on load.

use serde::{Deserialize, Serialize};
use soundset_core::{downmix_mono, AlgebraError, Gesture, Placement, Timeline};
use std::path::{Path, PathBuf};
use thiserror::Error;

use crate::wav::{read_wav, WavError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GestureRef {
    pub id: String,
    pub file: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacementDoc {
    pub gesture_id: String,
    pub row: usize,
    pub start: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimelineDoc {
    pub rate_hz: u32,
    pub length: usize,
    pub gestures: Vec<GestureRef>,
    #[serde(default)]
    pub placements: Vec<PlacementDoc>,
}

#[derive(Debug, Error)]
pub enum TimelineError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{}: {source}", path.display())]
    Wav {
        path: PathBuf,
        #[source]
        source: WavError,
    },
    #[error("duplicate gesture id '{0}'")]
    DuplicateGesture(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl TimelineError {
    /// File the error refers to, when there is one.
    pub fn path(&self) -> Option<&Path> {
        match self {
            TimelineError::Io { path, .. }
            | TimelineError::Json { path, .. }
            | TimelineError::Wav { path, .. } => Some(path),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LoadedTimeline {
    pub timeline: Timeline,
    /// Gesture ids in document order.
    pub gesture_order: Vec<String>,
}

pub fn load_gesture(id: &str, path: &Path) -> Result<Gesture, TimelineError> {
    let bytes = std::fs::read(path).map_err(|source| TimelineError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let buf = read_wav(&bytes).map_err(|source| TimelineError::Wav {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(Gesture::new(id, downmix_mono(&buf))?)
}

pub fn parse_timeline(text: &str, path: &Path) -> Result<TimelineDoc, TimelineError> {
    serde_json::from_str(text).map_err(|source| TimelineError::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_timeline(path: &Path) -> Result<LoadedTimeline, TimelineError> {
    let text = std::fs::read_to_string(path).map_err(|source| TimelineError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let doc = parse_timeline(&text, path)?;
    let base = path.parent().unwrap_or(Path::new(""));
    let mut timeline = Timeline::new(doc.rate_hz, doc.length);
    let mut gesture_order = Vec::with_capacity(doc.gestures.len());
    for g in &doc.gestures {
        if gesture_order.contains(&g.id) {
            return Err(TimelineError::DuplicateGesture(g.id.clone()));
        }
        timeline.add_gesture(load_gesture(&g.id, &base.join(&g.file))?)?;
        gesture_order.push(g.id.clone());
    }
    for p in doc.placements {
        timeline.place(Placement {
            gesture_id: p.gesture_id,
            row: p.row,
            start: p.start,
        })?;
    }
    Ok(LoadedTimeline {
        timeline,
        gesture_order,
    })
}
