//! File formats and command line for `soundset-core`: WAV in and out, text
//! series, PGM recurrence plots, timeline documents and JSON run reports.

pub mod ascii;
pub mod cli;
pub mod pgm;
pub mod report;
pub mod timeline;
pub mod wav;

pub use soundset_core as core;

pub use ascii::{format_series, parse_ascii, to_ascii_text, AsciiError};
pub use cli::{run_cli, CliError};
pub use pgm::{distance_pgm, export_image, recurrence_pgm, Image, PgmError};
pub use report::{
    AnalysisJson, EstimateJson, InputDescriptor, RecurrenceStats, RunReport, VerdictJson,
};
pub use timeline::{load_timeline, LoadedTimeline, TimelineDoc, TimelineError};
pub use wav::{data_chunk, read_wav, write_wav, PcmSpec, WavError};
