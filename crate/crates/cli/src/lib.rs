//! Command implementations behind the `striptok` binary.
//!
//! Every command walks its inputs in file-name order, runs the per-file work on
//! a worker pool and writes rows in input order, so `--jobs` never changes the
//! output bytes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use striptok::corpus;
use striptok::detokenizer::{detokenize, DecodeReport};
use striptok::mesh_io::{corpus_filter, load_obj, uv_islands, write_obj, RejectReason};
use striptok::metrics::{compare_meshes, MetricReport, DEFAULT_SAMPLES, DEFAULT_TAU};
use striptok::pipeline::{compare_round_trip, encode_mesh, EncodeOptions, Encoded};
use striptok::quantizer::{normalize, quantize_mesh};
use striptok::stripper::extract_strips_with;
use striptok::tokenizer::{baseline_serialize, compression_stats, read_tokens, serialize, write_tokens};
use striptok::{Error, Stride, UpAxis};

/// Published compression rates, printed next to `compare` output for context.
pub const REFERENCE_RATES: [(&str, f64); 3] = [("SATO", 0.283), ("DeepMesh", 0.330), ("BPT", 0.228)];

#[derive(Debug, Parser)]
#[command(name = "striptok", version, about = "Strip-based mesh tokenizer")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode OBJ meshes into token files
    Encode(EncodeArgs),
    /// Decode token files back into OBJ meshes
    Decode(DecodeArgs),
    /// Encode, decode and compare every mesh
    Roundtrip(PipelineArgs),
    /// Compression statistics without writing token files
    Stats(PipelineArgs),
    /// Apply the dataset filtering rules
    Filter(FilterArgs),
    /// Strip tokenizer vs. coordinate-triplet baseline, as CSV
    Compare(CompareArgs),
    /// Geometric metrics between each mesh and its decoded reconstruction
    Metrics(MetricsArgs),
    /// Write the synthetic test corpus as OBJ files
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl From<Axis> for UpAxis {
    fn from(a: Axis) -> Self {
        match a {
            Axis::X => UpAxis::X,
            Axis::Y => UpAxis::Y,
            Axis::Z => UpAxis::Z,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// OBJ file or directory of OBJ files
    pub input: PathBuf,
    /// 1 for triangles, 2 for quads
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub stride: u8,
    /// Partition strips by uv islands
    #[arg(long)]
    pub uv: bool,
    #[arg(long, value_enum, default_value_t = Axis::Y)]
    pub up: Axis,
    /// Worker threads (0 = all cores)
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Write the JSON-lines report here instead of stdout
    #[arg(long)]
    pub report: Option<PathBuf>,
}

impl Common {
    fn options(&self) -> EncodeOptions {
        EncodeOptions {
            stride: stride_of(self.stride),
            uv_mode: self.uv,
            up: self.up.into(),
        }
    }
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Output token file (file input) or directory (directory input)
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    /// Token file or directory of token files
    pub input: PathBuf,
    /// Output OBJ file (file input) or directory (directory input)
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Decode stride; defaults to the stride recorded in each file
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub stride: Option<u8>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    pub input: PathBuf,
    /// Accepted files are copied here
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Check the island-count rule against uv islands
    #[arg(long)]
    pub uv: bool,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Triangle OBJ file or directory
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Axis::Y)]
    pub up: Axis,
    /// Write CSV here instead of stdout
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_TAU)]
    pub tau: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Output directory
    pub output: PathBuf,
    /// Quad corpus instead of the triangle corpus
    #[arg(long)]
    pub quads: bool,
}


/// Bad arguments or unusable paths; exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// At least one file failed to process or failed its check.
    Failure,
}

impl Outcome {
    fn from_failures(failed: usize) -> Self {
        if failed == 0 {
            Outcome::Success
        } else {
            Outcome::Failure
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::Failure => 1,
        }
    }
}

fn stride_of(v: u8) -> Stride {
    Stride::from_value(usize::from(v)).expect("stride validated by the argument parser")
}

/// A single file, or the files with extension `ext` directly inside a directory, sorted by name.
pub fn collect_inputs(path: &Path, ext: &str) -> Result<Vec<PathBuf>, UsageError> {
    if path.is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    if !path.is_dir() {
        return Err(UsageError(format!("{}: no such file or directory", path.display())));
    }
    let entries = fs::read_dir(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x.eq_ignore_ascii_case(ext)))
        .collect();
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

fn display_name(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

/// Output path for `input`: `output` itself for single-file runs, otherwise
/// `<dir>/<stem>.<ext>` with `dir` defaulting to the input's directory.
fn output_path(input: &Path, output: Option<&Path>, single: bool, ext: &str) -> PathBuf {
    match (output, single) {
        (Some(o), true) => o.to_path_buf(),
        (Some(dir), false) => dir.join(Path::new(input.file_name().unwrap_or_default()).with_extension(ext)),
        (None, _) => input.with_extension(ext),
    }
}

fn prepare_output_dir(output: Option<&Path>, single: bool) -> Result<(), UsageError> {
    match output {
        Some(dir) if !single => fs::create_dir_all(dir).map_err(|e| UsageError(format!("{}: {e}", dir.display()))),
        _ => Ok(()),
    }
}

/// Maps `f` over `items` on `jobs` threads (0 = all cores), keeping input order.
pub fn par_map<T: Sync, R: Send>(jobs: usize, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> anyhow::Result<Vec<R>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    Ok(pool.install(|| items.par_iter().map(f).collect()))
}

#[derive(Serialize)]
struct ErrorRow<'a> {
    file: &'a str,
    error: &'a str,
}

/// Writes one JSON object per line; per-file errors become `{"file", "error"}` rows.
fn write_rows<R: Serialize>(
    rows: &[(String, Result<R, String>)],
    report: Option<&Path>,
    out: &mut dyn Write,
) -> anyhow::Result<usize> {
    let mut text = String::new();
    let mut failed = 0;
    for (file, row) in rows {
        let line = match row {
            Ok(r) => serde_json::to_string(r)?,
            Err(e) => {
                failed += 1;
                serde_json::to_string(&ErrorRow { file, error: e })?
            }
        };
        text.push_str(&line);
        text.push('\n');
    }
    match report {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(failed)
}

fn chain<T>(r: anyhow::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("{e:#}"))
}

/// Row of `encode` and `stats`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsRow {
    pub file: String,
    pub faces: usize,
    pub vertices: usize,
    pub islands: usize,
    pub strips: usize,
    pub tokens: usize,
    pub transitions: usize,
    pub comp_rate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comp_rate_quad12: Option<f64>,
    pub level_shares: [f64; 3],
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl StatsRow {
    pub fn new(file: String, e: &Encoded) -> Self {
        Self {
            file,
            faces: e.quantized.faces.len(),
            vertices: e.quantized.vertex_keys.len(),
            islands: e.quantized.island_count(),
            strips: e.strips.strips.len(),
            tokens: e.stats.token_length,
            transitions: e.stats.transitions,
            comp_rate: e.stats.comp_rate,
            comp_rate_quad12: e.stats.comp_rate_quad12,
            level_shares: e.stats.level_shares,
            warnings: e.warnings.clone(),
        }
    }
}

fn encode_file(path: &Path, opts: EncodeOptions) -> anyhow::Result<Encoded> {
    let mesh = load_obj(path).with_context(|| format!("loading {}", path.display()))?;
    encode_mesh(&mesh, opts).with_context(|| format!("encoding {}", path.display()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecodeRow {
    pub file: String,
    pub stride: usize,
    pub faces: usize,
    pub vertices: usize,
    pub islands: usize,
    /// False when nothing decodable remained and no OBJ was written.
    pub written: bool,
    #[serde(flatten)]
    pub report: DecodeReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundtripRow {
    pub file: String,
    pub passed: bool,
    pub faces: usize,
    pub strips: usize,
    pub tokens: usize,
    pub winding_checked: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divergence: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilterRow {
    pub file: String,
    pub accepted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<RejectReason>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub file: String,
    pub faces: usize,
    pub sato_tokens: usize,
    pub sato_comp_rate: f64,
    pub sato_transitions: usize,
    pub baseline_tokens: usize,
    pub baseline_comp_rate: f64,
    pub baseline_transitions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsRow {
    pub file: String,
    #[serde(flatten)]
    pub metrics: MetricReport,
}

/// Runs one command, writing reports to `out` and diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Encode(a) => cmd_encode(&a, out, err),
        Command::Decode(a) => cmd_decode(&a, out),
        Command::Roundtrip(a) => cmd_roundtrip(&a.common, out),
        Command::Stats(a) => cmd_stats(&a.common, out),
        Command::Filter(a) => cmd_filter(&a, out, err),
        Command::Compare(a) => cmd_compare(&a, out, err),
        Command::Metrics(a) => cmd_metrics(&a, out),
        Command::Generate(a) => cmd_generate(&a, err),
    }
}

fn cmd_encode(a: &EncodeArgs, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<Outcome> {
    let c = &a.common;
    let files = collect_inputs(&c.input, "obj")?;
    let single = c.input.is_file();
    prepare_output_dir(a.output.as_deref(), single)?;
    let opts = c.options();
    let rows = par_map(c.jobs, &files, |path| {
        let row = chain((|| {
            let encoded = encode_file(path, opts)?;
            let dest = output_path(path, a.output.as_deref(), single, "sato");
            write_tokens(&encoded.tokens, &dest).with_context(|| format!("writing {}", dest.display()))?;
            Ok(StatsRow::new(display_name(path), &encoded))
        })());
        (display_name(path), row)
    })?;
    for (file, row) in &rows {
        if let Ok(r) = row {
            for w in &r.warnings {
                writeln!(err, "warning: {file}: {w}")?;
            }
        }
    }
    let failed = write_rows(&rows, c.report.as_deref(), out)?;
    Ok(Outcome::from_failures(failed))
}

fn cmd_decode(a: &DecodeArgs, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    let files = collect_inputs(&a.input, "sato")?;
    let single = a.input.is_file();
    prepare_output_dir(a.output.as_deref(), single)?;
    let rows = par_map(a.jobs, &files, |path| {
        let row = chain((|| {
            let tokens = read_tokens(path).with_context(|| format!("reading {}", path.display()))?;
            let stride = a.stride.map_or(tokens.header.source_stride, stride_of);
            let decoded = detokenize(&tokens, stride);
            let written = !decoded.mesh.faces.is_empty();
            if written {
                let dest = output_path(path, a.output.as_deref(), single, "obj");
                write_obj(&decoded.mesh.to_mesh(), Some(&decoded.partition), &dest)
                    .with_context(|| format!("writing {}", dest.display()))?;
            }
            Ok(DecodeRow {
                file: display_name(path),
                stride: stride.value(),
                faces: decoded.mesh.faces.len(),
                vertices: decoded.mesh.vertex_keys.len(),
                islands: decoded.partition.island_count,
                written,
                report: decoded.report,
            })
        })());
        (display_name(path), row)
    })?;
    let failed = write_rows(&rows, a.report.as_deref(), out)?;
    Ok(Outcome::from_failures(failed))
}

/// Round-trip rows for every OBJ under `c.input`; used by `roundtrip`.
pub fn roundtrip_rows(c: &Common) -> anyhow::Result<Vec<(String, Result<RoundtripRow, String>)>> {
    let files = collect_inputs(&c.input, "obj")?;
    let opts = c.options();
    par_map(c.jobs, &files, |path| {
        let row = chain((|| {
            let encoded = encode_file(path, opts)?;
            let decoded = detokenize(&encoded.tokens, opts.stride);
            let check = compare_round_trip(&encoded.quantized, &decoded);
            let mut notes = check.notes;
            notes.extend(encoded.warnings.iter().cloned());
            Ok(RoundtripRow {
                file: display_name(path),
                passed: check.passed,
                faces: encoded.quantized.faces.len(),
                strips: encoded.strips.strips.len(),
                tokens: encoded.stats.token_length,
                winding_checked: check.winding_checked,
                divergence: check.divergence,
                notes,
            })
        })());
        (display_name(path), row)
    })
}

fn cmd_roundtrip(c: &Common, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    let rows = roundtrip_rows(c)?;
    let failed_checks = rows.iter().filter(|(_, r)| matches!(r, Ok(row) if !row.passed)).count();
    let failed = write_rows(&rows, c.report.as_deref(), out)?;
    Ok(Outcome::from_failures(failed + failed_checks))
}

fn cmd_stats(c: &Common, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    let files = collect_inputs(&c.input, "obj")?;
    let opts = c.options();
    let rows = par_map(c.jobs, &files, |path| {
        (display_name(path), chain(encode_file(path, opts).map(|e| StatsRow::new(display_name(path), &e))))
    })?;
    let failed = write_rows(&rows, c.report.as_deref(), out)?;
    Ok(Outcome::from_failures(failed))
}

fn cmd_filter(a: &FilterArgs, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<Outcome> {
    let files = collect_inputs(&a.input, "obj")?;
    if let Some(dir) = &a.output {
        fs::create_dir_all(dir).map_err(|e| UsageError(format!("{}: {e}", dir.display())))?;
    }
    let rows = par_map(a.jobs, &files, |path| {
        let row = chain((|| {
            let mesh = load_obj(path).with_context(|| format!("loading {}", path.display()))?;
            let mut note = None;
            let partition = if a.uv {
                match uv_islands(&mesh) {
                    Ok(p) => Some(p),
                    Err(Error::MissingUv) => {
                        note = Some("no uv data; island rule not applied".to_string());
                        None
                    }
                    Err(e) => return Err(e.into()),
                }
            } else {
                None
            };
            let verdict = corpus_filter(&mesh, partition.as_ref());
            if let (Ok(()), Some(dir)) = (verdict, &a.output) {
                let dest = dir.join(path.file_name().unwrap_or_default());
                fs::copy(path, &dest).with_context(|| format!("copying to {}", dest.display()))?;
            }
            Ok(FilterRow {
                file: display_name(path),
                accepted: verdict.is_ok(),
                reason: verdict.err(),
                note,
            })
        })());
        (display_name(path), row)
    })?;
    let accepted = rows.iter().filter(|(_, r)| matches!(r, Ok(row) if row.accepted)).count();
    let mut reasons: Vec<(RejectReason, usize)> = Vec::new();
    for reason in rows.iter().filter_map(|(_, r)| r.as_ref().ok().and_then(|row| row.reason)) {
        match reasons.iter_mut().find(|(r, _)| *r == reason) {
            Some((_, n)) => *n += 1,
            None => reasons.push((reason, 1)),
        }
    }
    reasons.sort_by_key(|(r, _)| r.as_str());
    let summary: Vec<String> = reasons.iter().map(|(r, n)| format!("{r}={n}")).collect();
    writeln!(err, "accepted {accepted} of {}; rejected: {}", rows.len(), summary.join(" "))?;
    let failed = write_rows(&rows, a.report.as_deref(), out)?;
    Ok(Outcome::from_failures(failed))
}

/// Compare rows for every triangle OBJ under the input, in file-name order.
pub fn compare_rows(a: &CompareArgs) -> anyhow::Result<Vec<(String, Result<CompareRow, String>)>> {
    let files = collect_inputs(&a.input, "obj")?;
    let up: UpAxis = a.up.into();
    par_map(a.jobs, &files, |path| {
        let row = chain((|| -> anyhow::Result<CompareRow> {
            let mesh = load_obj(path).with_context(|| format!("loading {}", path.display()))?;
            let q = quantize_mesh(&mesh, None)?;
            let strips = extract_strips_with(&q, Stride::One, up)?;
            let sato = compression_stats(&serialize(&strips, false)?)?;
            let base = compression_stats(&baseline_serialize(&q)?)?;
            Ok(CompareRow {
                file: display_name(path),
                faces: q.faces.len(),
                sato_tokens: sato.token_length,
                sato_comp_rate: sato.comp_rate,
                sato_transitions: sato.transitions,
                baseline_tokens: base.token_length,
                baseline_comp_rate: base.comp_rate,
                baseline_transitions: base.transitions,
            })
        })()
        .with_context(|| display_name(path)));
        (display_name(path), row)
    })
}

fn cmd_compare(a: &CompareArgs, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<Outcome> {
    let rows = compare_rows(a)?;
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let mut ok = Vec::new();
    let mut failed = 0;
    for (file, row) in &rows {
        match row {
            Ok(r) => {
                wtr.serialize(r)?;
                ok.push(r);
            }
            Err(e) => {
                failed += 1;
                writeln!(err, "error: {file}: {e}")?;
            }
        }
    }
    if !ok.is_empty() {
        let n = ok.len() as f64;
        let mean = |f: fn(&CompareRow) -> f64| ok.iter().map(|r| f(r)).sum::<f64>() / n;
        writeln!(
            err,
            "mean over {} files: comp_rate {:.4} vs baseline {:.4}; transitions {:.1} vs {:.1}",
            ok.len(),
            mean(|r| r.sato_comp_rate),
            mean(|r| r.baseline_comp_rate),
            mean(|r| r.sato_transitions as f64),
            mean(|r| r.baseline_transitions as f64),
        )?;
        wtr.write_record([
            "mean".to_string(),
            format!("{}", mean(|r| r.faces as f64)),
            format!("{}", mean(|r| r.sato_tokens as f64)),
            format!("{}", mean(|r| r.sato_comp_rate)),
            format!("{}", mean(|r| r.sato_transitions as f64)),
            format!("{}", mean(|r| r.baseline_tokens as f64)),
            format!("{}", mean(|r| r.baseline_comp_rate)),
            format!("{}", mean(|r| r.baseline_transitions as f64)),
        ])?;
    }
    let refs: Vec<String> = REFERENCE_RATES.iter().map(|(name, r)| format!("{name} {r:.3}")).collect();
    writeln!(err, "published comp_rate on a different corpus, for context only: {}", refs.join(", "))?;
    let bytes = wtr.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?;
    match &a.csv {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?,
        None => out.write_all(&bytes)?,
    }
    Ok(Outcome::from_failures(failed))
}

fn cmd_metrics(a: &MetricsArgs, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    let c = &a.common;
    if a.tau.is_nan() || a.tau <= 0.0 {
        return Err(UsageError("--tau must be positive".into()).into());
    }
    if a.samples == 0 {
        return Err(UsageError("--samples must be positive".into()).into());
    }
    let files = collect_inputs(&c.input, "obj")?;
    let opts = c.options();
    let rows = par_map(c.jobs, &files, |path| {
        let row = chain((|| {
            let mesh = load_obj(path).with_context(|| format!("loading {}", path.display()))?;
            let encoded = encode_mesh(&mesh, opts)?;
            let decoded = detokenize(&encoded.tokens, opts.stride);
            // compare in the unit cube so tau is in normalized units
            let (source, transform) = normalize(&mesh)?;
            let mut rebuilt = decoded.mesh.to_mesh();
            rebuilt.positions.iter_mut().for_each(|p| *p = transform.to_normalized(*p));
            let geometry = compare_meshes(&source, &rebuilt, a.samples, a.seed, a.tau)?;
            Ok(MetricsRow {
                file: display_name(path),
                metrics: MetricReport::new(geometry, &encoded.stats, encoded.strips.strips.len()),
            })
        })());
        (display_name(path), row)
    })?;
    let failed = write_rows(&rows, c.report.as_deref(), out)?;
    Ok(Outcome::from_failures(failed))
}

fn cmd_generate(a: &GenerateArgs, err: &mut dyn Write) -> anyhow::Result<Outcome> {
    fs::create_dir_all(&a.output).map_err(|e| UsageError(format!("{}: {e}", a.output.display())))?;
    let set = if a.quads { corpus::quad_corpus() } else { corpus::triangle_corpus() };
    for (name, mesh) in &set {
        let dest = a.output.join(format!("{name}.obj"));
        write_obj(mesh, None, &dest).with_context(|| format!("writing {}", dest.display()))?;
    }
    writeln!(err, "wrote {} meshes to {}", set.len(), a.output.display())?;
    Ok(Outcome::Success)
}
