//! `soundset` command line.
//!
//! Exit status is 0 on success, 2 on usage errors and 1 on data errors. Data
//! errors print one JSON object on stderr, e.g.
//! `{"error":"io","path":"missing.wav","message":"..."}`.

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use soundset_core::algebra::FuzzyMode;
use soundset_core::synthesis::FIXTURE_RATE_HZ;
use soundset_core::{
    analyze_all, ca_evolve, decimate, delay_embed, distance_matrix, downmix_mono, fuzzy_combine,
    gen_burst_fixture, gen_fbm, gen_sine, grid_to_timeline, intersect_overlay, is_almost_disjoint,
    recurrence_rate, render_timeline, threshold_recurrence, union_adjacent, AlgebraError,
    AnalysisError, CaRule, EmbeddingConfig, EpsilonMode, FbmSpec, FitConfig, Gesture, GridError,
    GridSpec, RecurrenceError, SampleBuffer, SynthError, MAX_POINTS,
};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use thiserror::Error;

use crate::ascii::{format_series, parse_ascii, to_ascii_text, AsciiError};
use crate::pgm::{export_image, Image, PgmError};
use crate::report::{
    fit_config_json, InputDescriptor, RecurrenceStats, ReportError, RunReport, VerdictJson,
};
use crate::timeline::{load_gesture, load_timeline, TimelineError};
use crate::wav::{read_wav, write_wav, PcmSpec, WavError};

/// Peak level fBm paths are scaled to before 16-bit export.
pub const FBM_WAV_PEAK: f64 = 0.9;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Wav { path: PathBuf, source: WavError },
    #[error("{}: {source}", path.display())]
    Ascii { path: PathBuf, source: AsciiError },
    #[error(transparent)]
    Timeline(#[from] TimelineError),
    #[error(transparent)]
    Image(#[from] PgmError),
    #[error("{0}")]
    Analysis(#[from] AnalysisError),
    #[error("{0}")]
    Algebra(#[from] AlgebraError),
    #[error("{0}")]
    Recurrence(#[from] RecurrenceError),
    #[error("{0}")]
    Synth(#[from] SynthError),
    #[error("{0}")]
    Grid(#[from] GridError),
    #[error("{0}")]
    Report(#[from] ReportError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Read { .. } | CliError::Write { .. } | CliError::Image(_) => "io",
            CliError::Wav { .. } | CliError::Ascii { .. } => "decode",
            CliError::Timeline(TimelineError::Io { .. }) => "io",
            CliError::Timeline(_) => "timeline",
            CliError::Analysis(_) => "analysis",
            CliError::Algebra(_) => "algebra",
            CliError::Recurrence(_) => "recurrence",
            CliError::Synth(_) => "synth",
            CliError::Grid(_) => "grid",
            CliError::Report(_) => "report",
        }
    }

    pub fn path(&self) -> Option<&Path> {
        match self {
            CliError::Read { path, .. }
            | CliError::Write { path, .. }
            | CliError::Wav { path, .. }
            | CliError::Ascii { path, .. } => Some(path),
            CliError::Image(PgmError::IoFailure { path, .. }) => Some(path),
            CliError::Timeline(e) => e.path(),
            _ => None,
        }
    }

    /// Single-line JSON for stderr.
    pub fn to_json_line(&self) -> String {
        let mut v = json!({ "error": self.kind(), "message": self.to_string() });
        if let Some(p) = self.path() {
            v["path"] = Value::String(p.display().to_string());
        }
        v.to_string()
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "soundset",
    version,
    about = "Fractal analysis and set algebra for WAV gestures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Hurst exponent and fractal dimension by three estimators
    Analyze(AnalyzeArgs),
    /// Convert a WAV file to one amplitude per line
    Ascii(AsciiArgs),
    /// Combine two gestures, or render a timeline document
    Combine(CombineArgs),
    /// Delay embedding and recurrence plot
    Recurrence(RecurrenceArgs),
    /// Generate test signals
    #[command(subcommand)]
    Synth(SynthCommand),
    /// Trigger gestures from an elementary cellular automaton
    Grid(GridArgs),
}

#[derive(Debug, Args)]
struct FitArgs {
    /// Smallest variogram lag in samples
    #[arg(long, default_value_t = 1)]
    min_lag: usize,
    /// Largest variogram lag as a fraction of the length
    #[arg(long = "max-lag-frac", default_value_t = 0.25)]
    max_lag_frac: f64,
    /// Fraction of the band up to Nyquist used by the spectral fit
    #[arg(long = "spectral-high-frac", default_value_t = 0.25)]
    spectral_high_frac: f64,
}

impl FitArgs {
    fn config(&self) -> FitConfig {
        FitConfig {
            min_lag: self.min_lag,
            max_lag_fraction: self.max_lag_frac,
            spectral_high_fraction: self.spectral_high_frac,
            ..FitConfig::default()
        }
    }
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    input: PathBuf,
    /// Read the input as a text series (one value per line) instead of WAV
    #[arg(long)]
    ascii: bool,
    #[command(flatten)]
    fit: FitArgs,
    /// Write the report here instead of standard output
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AsciiArgs {
    input: PathBuf,
    /// Defaults to standard output
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Op {
    Union,
    Intersect,
    FuzzyUnion,
    FuzzyIntersect,
}

impl Op {
    fn name(self) -> &'static str {
        match self {
            Op::Union => "union",
            Op::Intersect => "intersect",
            Op::FuzzyUnion => "fuzzy-union",
            Op::FuzzyIntersect => "fuzzy-intersect",
        }
    }

    fn is_intersection(self) -> bool {
        matches!(self, Op::Intersect | Op::FuzzyIntersect)
    }
}

#[derive(Debug, Args)]
struct CombineArgs {
    #[arg(long, value_enum, required_unless_present = "timeline")]
    op: Option<Op>,
    /// Gestures A and B
    #[arg(num_args = 2, value_names = ["A", "B"], required_unless_present = "timeline", conflicts_with = "timeline")]
    inputs: Vec<PathBuf>,
    /// Render a timeline document instead of combining two files
    #[arg(long, conflicts_with = "op")]
    timeline: Option<PathBuf>,
    /// Start of B relative to A, in samples (intersect only)
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    offset: i64,
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Analyze the result; intersections also get an almost-disjoint verdict
    #[arg(long)]
    analyze: bool,
    /// Slack for the almost-disjoint verdict
    #[arg(long, default_value_t = 0.0)]
    tolerance: f64,
    #[command(flatten)]
    fit: FitArgs,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RecurrenceArgs {
    input: PathBuf,
    /// Embedding dimension
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    dim: u64,
    /// Embedding delay in samples
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    delay: u64,
    /// Target recurrence rate; the threshold is picked to hit it (default 0.1)
    #[arg(long, conflicts_with = "epsilon")]
    rate: Option<f64>,
    /// Fixed distance threshold
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = MAX_POINTS as u64, value_parser = clap::value_parser!(u64).range(1..=MAX_POINTS as u64))]
    max_points: u64,
    /// Keep every K-th sample; by default the smallest K that fits max-points
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    decimate: Option<u64>,
    /// Plot the distance matrix in greyscale instead of the recurrence matrix
    #[arg(long)]
    distance: bool,
    #[arg(short, long)]
    out: PathBuf,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum SynthCommand {
    /// Fractional Brownian motion; WAV output is scaled to a 0.9 peak
    Fbm {
        #[arg(long)]
        hurst: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = FIXTURE_RATE_HZ)]
        rate: u32,
        /// .txt writes text, anything else 16-bit WAV
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Decaying noise burst used as a stand-in gesture
    Burst {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 5.0)]
        decay: f64,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    Sine {
        #[arg(long)]
        freq: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = FIXTURE_RATE_HZ)]
        rate: u32,
        #[arg(long, default_value_t = 0.5)]
        amplitude: f64,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Elementary CA rule number
    #[arg(long)]
    rule: u32,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    rows: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    cols: u64,
    /// Column width in samples
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    step: u64,
    /// First column: a 0/1 string with one digit per row, or `center`
    #[arg(long)]
    seed_column: String,
    /// Timeline document supplying the gesture table; row r uses gesture r mod count
    #[arg(long)]
    gestures: PathBuf,
    #[arg(short, long)]
    out: PathBuf,
    /// Also write the evolved cells, one row per line
    #[arg(long)]
    cells: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn read_buffer(path: &Path) -> Result<SampleBuffer, CliError> {
    read_wav(&read_file(path)?).map_err(|source| CliError::Wav {
        path: path.to_path_buf(),
        source,
    })
}

fn write_buffer(path: &Path, buf: &SampleBuffer) -> Result<(), CliError> {
    let bytes = write_wav(buf, &PcmSpec::cd_like(buf)).map_err(|source| CliError::Wav {
        path: path.to_path_buf(),
        source,
    })?;
    write_file(path, &bytes)
}

fn describe(path: &Path, buf: &SampleBuffer) -> InputDescriptor {
    InputDescriptor {
        source: path.display().to_string(),
        samples: buf.len(),
        rate_hz: Some(buf.rate_hz()),
    }
}

fn is_text_path(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("txt"))
}

fn emit(report: &RunReport, json: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let text = report.to_json()?;
    match json {
        Some(path) => write_file(path, text.as_bytes()),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Write {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn analyze(args: &AnalyzeArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = args.fit.config();
    let (series, input) = if args.ascii {
        let bytes = read_file(&args.input)?;
        let text = String::from_utf8_lossy(&bytes);
        let series = parse_ascii(&text).map_err(|source| CliError::Ascii {
            path: args.input.clone(),
            source,
        })?;
        let input = InputDescriptor {
            source: args.input.display().to_string(),
            samples: series.len(),
            rate_hz: None,
        };
        (series, input)
    } else {
        let buf = read_buffer(&args.input)?;
        let input = describe(&args.input, &buf);
        (downmix_mono(&buf).into_channels().swap_remove(0), input)
    };
    let mut report = RunReport::new("analyze");
    report.inputs.push(input);
    report.param("fit_config", fit_config_json(&cfg));
    report.analysis = Some((&analyze_all(&series, &cfg)?).into());
    emit(&report, args.json.as_deref(), stdout)
}

fn ascii(args: &AsciiArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let buf = downmix_mono(&read_buffer(&args.input)?);
    let text = to_ascii_text(&buf).map_err(|source| CliError::Ascii {
        path: args.input.clone(),
        source,
    })?;
    match &args.out {
        Some(path) => write_file(path, text.as_bytes()),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Write {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn load_input_gesture(path: &Path) -> Result<Gesture, CliError> {
    Ok(load_gesture(&path.display().to_string(), path)?)
}

fn combine(args: &CombineArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = args.fit.config();
    let mut report;
    let out;
    let mut operands: Option<(Gesture, Gesture)> = None;
    if let Some(doc) = &args.timeline {
        let loaded = load_timeline(doc)?;
        out = render_timeline(&loaded.timeline);
        report = RunReport::new("render");
        report.inputs.push(InputDescriptor {
            source: doc.display().to_string(),
            samples: loaded.timeline.length(),
            rate_hz: Some(loaded.timeline.rate_hz()),
        });
        report.param("rows", loaded.timeline.rows());
        report.param("placements", loaded.timeline.placements().len());
    } else {
        let op = args.op.expect("clap requires --op without --timeline");
        let a = load_input_gesture(&args.inputs[0])?;
        let b = load_input_gesture(&args.inputs[1])?;
        out = match op {
            Op::Union => union_adjacent(&a, &b)?,
            Op::Intersect => intersect_overlay(&a, &b, args.offset)?,
            Op::FuzzyUnion => fuzzy_combine(&a, &b, FuzzyMode::Union)?,
            Op::FuzzyIntersect => fuzzy_combine(&a, &b, FuzzyMode::Intersect)?,
        };
        report = RunReport::new(format!("combine:{}", op.name()));
        for (path, g) in args.inputs.iter().zip([&a, &b]) {
            report.inputs.push(describe(path, g.buffer()));
        }
        report.param("op", op.name());
        if op == Op::Intersect {
            report.param("offset", args.offset);
        }
        if args.analyze && op.is_intersection() {
            operands = Some((a, b));
        }
    }
    report.param("output_samples", out.len());
    if args.analyze {
        report.param("fit_config", fit_config_json(&cfg));
        let result = analyze_all(out.samples(), &cfg)?;
        if let Some((a, b)) = operands {
            let dim = |g: &Gesture| -> Result<f64, CliError> {
                Ok(analyze_all(g.samples(), &cfg)?.mean_dimension())
            };
            let verdict =
                is_almost_disjoint(dim(&a)?, dim(&b)?, result.mean_dimension(), args.tolerance);
            report.param("tolerance", args.tolerance);
            report.verdict = Some(VerdictJson::new(&verdict, args.tolerance));
        }
        report.analysis = Some((&result).into());
    }
    if let Some(path) = &args.out {
        write_buffer(path, &out)?;
    }
    emit(&report, args.json.as_deref(), stdout)
}

/// Smallest decimation that brings the embedding under `max_points`.
fn auto_decimation(n: usize, span: usize, max_points: usize) -> usize {
    let mut k = n.div_ceil(max_points + span).max(1);
    while n.div_ceil(k).saturating_sub(span) > max_points {
        k += 1;
    }
    k
}

fn recurrence(args: &RecurrenceArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let buf = read_buffer(&args.input)?;
    let series = downmix_mono(&buf).into_channels().swap_remove(0);
    let cfg = EmbeddingConfig {
        dimension: args.dim as usize,
        delay: args.delay as usize,
    };
    let max_points = args.max_points as usize;
    let span = (cfg.dimension - 1).saturating_mul(cfg.delay);
    let k = match args.decimate {
        Some(k) => k as usize,
        None => auto_decimation(series.len(), span, max_points),
    };
    let reduced = decimate(&series, k)?;
    let embedding = delay_embed(&reduced, &cfg)?;
    if embedding.len() > max_points {
        return Err(RecurrenceError::TooManyPoints {
            points: embedding.len(),
            max: max_points,
        }
        .into());
    }
    let mode = match (args.epsilon, args.rate) {
        (Some(e), _) => EpsilonMode::Fixed(e),
        (None, r) => EpsilonMode::Rate(r.unwrap_or(0.1)),
    };
    let d = distance_matrix(&embedding)?;
    let r = threshold_recurrence(&d, mode)?;
    let image = if args.distance {
        Image::Distance(&d)
    } else {
        Image::Recurrence(&r)
    };
    export_image(image, &args.out)?;

    let mut report = RunReport::new("recurrence");
    report.inputs.push(describe(&args.input, &buf));
    match mode {
        EpsilonMode::Fixed(e) => report.param("epsilon_mode", json!({ "fixed": e })),
        EpsilonMode::Rate(rho) => report.param("epsilon_mode", json!({ "rate": rho })),
    };
    report.param("max_points", max_points);
    report.param(
        "image",
        if args.distance {
            "distance"
        } else {
            "recurrence"
        },
    );
    report.recurrence_stats = Some(RecurrenceStats {
        m: cfg.dimension,
        tau: cfg.delay,
        epsilon: r.epsilon(),
        achieved_rate: recurrence_rate(&r),
        decimate: k,
        points: embedding.len(),
    });
    emit(&report, args.json.as_deref(), stdout)
}

fn write_series(path: &Path, series: &[f64], rate: u32) -> Result<(), CliError> {
    if is_text_path(path) {
        write_file(path, format_series(series).as_bytes())
    } else {
        let buf = SampleBuffer::mono(rate, series.to_vec())
            .map_err(|e| CliError::Usage(e.to_string()))?;
        write_buffer(path, &buf)
    }
}

fn synth(cmd: &SynthCommand, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (report, json) = match cmd {
        SynthCommand::Fbm {
            hurst,
            n,
            seed,
            rate,
            out,
            json,
        } => {
            let path = gen_fbm(&FbmSpec {
                hurst: *hurst,
                length: *n,
                seed: *seed,
            })?;
            let mut values = path.values;
            let mut gain = 1.0;
            if !is_text_path(out) {
                let peak = values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                if peak > 0.0 {
                    gain = FBM_WAV_PEAK / peak;
                    values.iter_mut().for_each(|x| *x *= gain);
                }
            }
            write_series(out, &values, *rate)?;
            let mut r = RunReport::new("synth:fbm");
            r.inputs.push(InputDescriptor {
                source: format!("fbm(hurst={hurst}, n={n})"),
                samples: *n,
                rate_hz: Some(*rate),
            });
            r.param("hurst", *hurst)
                .param("circulant_exact", path.exact)
                .param("gain", gain);
            r.seed = Some(*seed);
            (r, json)
        }
        SynthCommand::Burst {
            n,
            seed,
            decay,
            out,
            json,
        } => {
            let g = gen_burst_fixture(*n, *seed, *decay)?;
            write_series(out, g.samples(), g.rate_hz())?;
            let mut r = RunReport::new("synth:burst");
            r.inputs.push(InputDescriptor {
                source: format!("burst(n={n}, decay={decay})"),
                samples: *n,
                rate_hz: Some(g.rate_hz()),
            });
            r.param("decay", *decay);
            r.seed = Some(*seed);
            (r, json)
        }
        SynthCommand::Sine {
            freq,
            n,
            rate,
            amplitude,
            out,
            json,
        } => {
            let x = gen_sine(*freq, *n, *rate, *amplitude)?;
            write_series(out, &x, *rate)?;
            let mut r = RunReport::new("synth:sine");
            r.inputs.push(InputDescriptor {
                source: format!("sine(freq={freq}, n={n})"),
                samples: *n,
                rate_hz: Some(*rate),
            });
            r.param("freq_hz", *freq).param("amplitude", *amplitude);
            (r, json)
        }
    };
    emit(&report, json.as_deref(), stdout)
}

fn parse_seed_column(spec: &str, rows: usize) -> Result<Vec<bool>, CliError> {
    if spec == "center" {
        let mut col = vec![false; rows];
        col[rows / 2] = true;
        return Ok(col);
    }
    if spec.len() != rows || !spec.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(CliError::Usage(format!(
            "--seed-column must be 'center' or {rows} digits of 0/1, got '{spec}'"
        )));
    }
    Ok(spec.bytes().map(|b| b == b'1').collect())
}

fn cells_text(cells: &[Vec<bool>]) -> String {
    let mut s = String::new();
    for row in cells {
        s.extend(row.iter().map(|&b| if b { '1' } else { '0' }));
        s.push('\n');
    }
    s
}

fn grid(args: &GridArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let rows = args.rows as usize;
    let cols = args.cols as usize;
    let rule = CaRule::new(args.rule).map_err(|e| CliError::Usage(e.to_string()))?;
    let initial = parse_seed_column(&args.seed_column, rows)?;
    let loaded = load_timeline(&args.gestures)?;
    if loaded.gesture_order.is_empty() {
        return Err(GridError::NoRows.into());
    }
    let cells = ca_evolve(&initial, rule, cols)?;
    let row_gestures = (0..rows)
        .map(|r| loaded.gesture_order[r % loaded.gesture_order.len()].clone())
        .collect();
    let spec = GridSpec::new(row_gestures, cols, args.step as usize, cells)?;
    let timeline = grid_to_timeline(&spec, loaded.timeline.gestures())?;
    write_buffer(&args.out, &render_timeline(&timeline))?;
    if let Some(path) = &args.cells {
        write_file(path, cells_text(spec.cells()).as_bytes())?;
    }
    let mut report = RunReport::new("grid");
    report.inputs.push(InputDescriptor {
        source: args.gestures.display().to_string(),
        samples: timeline.length(),
        rate_hz: Some(timeline.rate_hz()),
    });
    report
        .param("rule", rule.number())
        .param("rows", rows)
        .param("n_cols", cols)
        .param("step", args.step)
        .param("seed_column", args.seed_column.as_str())
        .param("row_gestures", spec.row_gestures().to_vec())
        .param("active_cells", spec.active_cells());
    emit(&report, args.json.as_deref(), stdout)
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Analyze(a) => analyze(a, stdout),
        Command::Ascii(a) => ascii(a, stdout),
        Command::Combine(a) => combine(a, stdout),
        Command::Recurrence(a) => recurrence(a, stdout),
        Command::Synth(s) => synth(s, stdout),
        Command::Grid(a) => grid(a, stdout),
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run_cli<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let parsed = Cli::command()
        .try_get_matches_from(argv)
        .and_then(|m| Cli::from_arg_matches(&m));
    let cli = match parsed {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match dispatch(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json_line());
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimation_fits() {
        assert_eq!(auto_decimation(100, 1, 8192), 1);
        assert_eq!(auto_decimation(65_536, 1, 4096), 16);
        for (n, span, max) in [
            (65_536, 0, 4096),
            (10_000, 7, 100),
            (8193, 1, 8192),
            (7, 0, 1),
        ] {
            let k = auto_decimation(n, span, max);
            assert!(n.div_ceil(k).saturating_sub(span) <= max);
            assert!(k == 1 || n.div_ceil(k - 1).saturating_sub(span) > max);
        }
    }

    #[test]
    fn seed_columns() {
        assert_eq!(
            parse_seed_column("center", 5).unwrap(),
            [false, false, true, false, false]
        );
        assert_eq!(parse_seed_column("101", 3).unwrap(), [true, false, true]);
        assert!(parse_seed_column("10", 3).is_err());
        assert!(parse_seed_column("1x1", 3).is_err());
    }

    #[test]
    fn cells_render_as_digits() {
        assert_eq!(
            cells_text(&[vec![true, false], vec![false, false]]),
            "10\n00\n"
        );
    }

    #[test]
    fn error_line_is_json() {
        let e = CliError::Read {
            path: "a b.wav".into(),
            source: std::io::Error::from(std::io::ErrorKind::NotFound),
        };
        let v: Value = serde_json::from_str(&e.to_json_line()).unwrap();
        assert_eq!(v["error"], "io");
        assert_eq!(v["path"], "a b.wav");
        assert!(!e.to_json_line().contains('\n'));
    }
}
