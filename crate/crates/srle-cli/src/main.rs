//! Command-line surface: compress, decompress, stats, sweep, bench.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O error, 3
//! format/corruption error. Diagnostics go to stderr; machine-readable
//! results (JSON or CSV) go to stdout.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use srle::analysis::{self, rx_approx};
use srle::codec::{self, SrleContainer};
use srle::ingest::{self, ColumnSelector, Dictionary, ElementKind};
use srle::suitability;
use srle::types::{CodecConfig, DistributionEstimate, Mode, SuitableSet, SymbolSequence};
use srle::Representation;

#[derive(Parser)]
#[command(name = "srle", version, about = "Selective run-length encoding toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compress a file into a .srle container
    Compress(CompressArgs),
    /// Reconstruct the original payload from a .srle container
    Decompress(DecompressArgs),
    /// Per-symbol diagnostic table (CSV to stdout)
    Stats(StatsArgs),
    /// Exact-vs-approximate expected-reclaim grid (CSV)
    Sweep(SweepArgs),
    /// Compare all selection policies on one input (CSV to stdout)
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ours,
    Vrle,
    Drle,
    Oracle,
}

impl ModeArg {
    fn to_mode(self) -> Mode {
        match self {
            ModeArg::Ours => Mode::Ours,
            ModeArg::Vrle => Mode::VRle,
            ModeArg::Drle => Mode::DRle,
            ModeArg::Oracle => Mode::Exploratory,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ReprArg {
    Bitpack,
    Varlen,
}

#[derive(Args)]
struct IngestOpts {
    /// Input format: u8, u64le, or csv:<column>
    #[arg(long, default_value = "u8")]
    format: String,
    /// Treat the first CSV row as a header
    #[arg(long, default_value_t = true)]
    has_header: bool,
}

#[derive(Args)]
struct PolicyOpts {
    #[arg(long, value_enum, default_value = "ours")]
    mode: ModeArg,
    /// Run-control bit width
    #[arg(long, default_value_t = 4)]
    br: u32,
    #[arg(long, value_enum, default_value = "bitpack")]
    repr: ReprArg,
    #[arg(long, default_value_t = 10_000)]
    sample_size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CompressArgs {
    input: PathBuf,
    output: PathBuf,
    #[command(flatten)]
    ingest: IngestOpts,
    #[command(flatten)]
    policy: PolicyOpts,
}

#[derive(Args)]
struct DecompressArgs {
    input: PathBuf,
    output: PathBuf,
    #[command(flatten)]
    ingest: IngestOpts,
    /// Dictionary sidecar path (defaults to the input with a .dict extension)
    #[arg(long)]
    dict: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    input: PathBuf,
    #[command(flatten)]
    ingest: IngestOpts,
    #[command(flatten)]
    policy: PolicyOpts,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated probabilities
    #[arg(long, value_delimiter = ',', required = true)]
    p_grid: Vec<f64>,
    /// Comma-separated sequence lengths
    #[arg(long, value_delimiter = ',', required = true)]
    n_grid: Vec<u64>,
    /// Comma-separated run-control widths
    #[arg(long, value_delimiter = ',', required = true)]
    br_grid: Vec<u32>,
    /// Write CSV here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    input: PathBuf,
    #[command(flatten)]
    ingest: IngestOpts,
    #[command(flatten)]
    policy: PolicyOpts,
}

enum CliError {
    Usage(String),
    Io(String),
    Format(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Format(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Format(m) => m,
        }
    }
}

fn classify(err: srle::Error) -> CliError {
    use srle::Error::*;
    match err {
        InvalidArgument(_) | MissingColumn(_) => CliError::Usage(err.to_string()),
        Io(_) => CliError::Io(err.to_string()),
        _ => CliError::Format(err.to_string()),
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

enum InputFormat {
    Raw(ElementKind),
    Csv(ColumnSelector),
}

fn parse_format(format: &str) -> Result<InputFormat, CliError> {
    match format {
        "u8" => Ok(InputFormat::Raw(ElementKind::U8)),
        "u64le" => Ok(InputFormat::Raw(ElementKind::U64Le)),
        other => match other.strip_prefix("csv:") {
            Some(col) if !col.is_empty() => {
                let selector = match col.parse::<usize>() {
                    Ok(i) => ColumnSelector::Index(i),
                    Err(_) => ColumnSelector::Name(col.to_owned()),
                };
                Ok(InputFormat::Csv(selector))
            }
            _ => Err(CliError::Usage(format!(
                "unknown format `{other}` (expected u8, u64le, or csv:<column>)"
            ))),
        },
    }
}

fn ingest_input(
    path: &Path,
    opts: &IngestOpts,
) -> Result<(SymbolSequence, Option<Dictionary>), CliError> {
    // Flags are validated before any I/O happens.
    let format = parse_format(&opts.format)?;
    let bytes = read_file(path)?;
    match format {
        InputFormat::Raw(kind) => {
            let seq = ingest::ingest_raw(&bytes, kind).map_err(classify)?;
            Ok((seq, None))
        }
        InputFormat::Csv(selector) => {
            let text = String::from_utf8(bytes)
                .map_err(|e| CliError::Format(format!("input is not UTF-8: {e}")))?;
            let (seq, dict) =
                ingest::ingest_csv_column(&text, &selector, opts.has_header).map_err(classify)?;
            Ok((seq, Some(dict)))
        }
    }
}

fn pick_representation(repr: ReprArg, seq: &SymbolSequence) -> Result<Representation, CliError> {
    match repr {
        ReprArg::Bitpack => {
            let width = match seq.max_element() {
                Some(max) => srle::bitio::min_width(max),
                None => 1,
            };
            Ok(Representation::BitPacking { width })
        }
        ReprArg::Varlen => Ok(Representation::VariableLength),
    }
}

fn select_set(
    seq: &SymbolSequence,
    dist: &DistributionEstimate,
    config: &CodecConfig,
) -> Result<SuitableSet, CliError> {
    let g = match config.mode {
        Mode::Ours => {
            suitability::build_suitable_set(dist, config.b_r, |x| {
                config.representation.symbol_width(x)
            })
            .map_err(classify)?
        }
        Mode::VRle => suitability::full_set(&DistributionEstimate::full_pass(seq)),
        Mode::DRle => suitability::dominant_set(dist),
        Mode::Exploratory => codec::exploratory_suitable_set(seq, config).map_err(classify)?,
    };
    Ok(g)
}

fn input_payload_bits(seq: &SymbolSequence, repr: Representation) -> Result<u64, CliError> {
    let mut bits = 0u64;
    for &x in &seq.elements {
        bits += repr.symbol_width(x).map_err(classify)? as u64;
    }
    Ok(bits)
}

#[derive(Serialize)]
struct CompressReport {
    n: u64,
    g_size: usize,
    input_bits: u64,
    payload_bits: u64,
    header_bytes: usize,
    output_bytes: usize,
    compression_ratio: f64,
}

fn dict_path(output: &Path) -> PathBuf {
    output.with_extension("dict")
}

fn ratio(input_bits: u64, payload_bits: u64) -> f64 {
    if payload_bits == 0 {
        if input_bits == 0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        input_bits as f64 / payload_bits as f64
    }
}

fn run_compress(args: &CompressArgs) -> Result<(), CliError> {
    let (seq, dict) = ingest_input(&args.input, &args.ingest)?;
    let repr = pick_representation(args.policy.repr, &seq)?;
    let config = CodecConfig::new(args.policy.br, repr, args.policy.mode.to_mode())
        .map_err(classify)?;
    let dist = ingest::sample_distribution(&seq, args.policy.sample_size, args.policy.seed)
        .map_err(classify)?;
    let g = select_set(&seq, &dist, &config)?;
    let container = codec::encode(&seq, &g, &config).map_err(classify)?;
    let bytes = container.serialize().map_err(classify)?;
    write_file(&args.output, &bytes)?;
    if let Some(dict) = dict {
        let mut buf = Vec::new();
        dict.write_to(&mut buf).map_err(classify)?;
        write_file(&dict_path(&args.output), &buf)?;
    }

    let input_bits = input_payload_bits(&seq, repr)?;
    let payload_bits = container.payload_bits().map_err(classify)?;
    let report = CompressReport {
        n: container.n,
        g_size: g.len(),
        input_bits,
        payload_bits,
        header_bytes: container.header_bytes(),
        output_bytes: bytes.len(),
        compression_ratio: ratio(input_bits, payload_bits),
    };
    println!("{}", serde_json::to_string(&report).unwrap());
    Ok(())
}

fn run_decompress(args: &DecompressArgs) -> Result<(), CliError> {
    let bytes = read_file(&args.input)?;
    let container = SrleContainer::deserialize(&bytes).map_err(classify)?;
    let seq = codec::decode(&container).map_err(classify)?;
    let out = match parse_format(&args.ingest.format)? {
        InputFormat::Raw(kind) => ingest::render_raw(&seq, kind).map_err(classify)?,
        InputFormat::Csv(_) => {
            let path = args.dict.clone().unwrap_or_else(|| dict_path(&args.input));
            let dict_bytes = read_file(&path)?;
            let dict = Dictionary::read_from(dict_bytes.as_slice()).map_err(classify)?;
            let cells = ingest::dictionary_unmap(&seq, &dict).map_err(classify)?;
            let mut buf = Vec::new();
            for cell in cells {
                buf.extend_from_slice(cell.as_bytes());
                buf.push(b'\n');
            }
            buf
        }
    };
    // Built fully in memory first so a corrupt container never leaves
    // a partial output file behind.
    write_file(&args.output, &out)
}

fn run_stats(args: &StatsArgs) -> Result<(), CliError> {
    let (seq, _) = ingest_input(&args.input, &args.ingest)?;
    let repr = pick_representation(args.policy.repr, &seq)?;
    let config = CodecConfig::new(args.policy.br, repr, args.policy.mode.to_mode())
        .map_err(classify)?;
    let dist = ingest::sample_distribution(&seq, args.policy.sample_size, args.policy.seed)
        .map_err(classify)?;
    let g = select_set(&seq, &dist, &config)?;

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    writeln!(
        out,
        "symbol,count,p_hat,b_x,threshold,rx_approx,expected_savings_bits,in_G"
    )
    .map_err(|e| CliError::Io(e.to_string()))?;
    let n = dist.total();
    for (&symbol, &count) in dist.counts() {
        let b_x = repr.symbol_width(symbol).map_err(classify)?;
        let p_hat = dist.probability(symbol);
        let threshold = suitability::suitability_threshold(b_x, config.b_r).map_err(classify)?;
        let rx = rx_approx(p_hat, n);
        let savings = analysis::expected_savings_bits(count, b_x, config.b_r, rx);
        writeln!(
            out,
            "{symbol},{count},{p_hat},{b_x},{threshold},{rx},{savings},{}",
            g.contains(symbol)
        )
        .map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(())
}

fn run_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let rows = analysis::sweep_rx(&args.p_grid, &args.n_grid, &args.br_grid).map_err(classify)?;
    let mut buf = Vec::new();
    analysis::write_sweep_csv(&rows, &mut buf).map_err(classify)?;
    match &args.output {
        Some(path) => write_file(path, &buf),
        None => {
            std::io::stdout()
                .write_all(&buf)
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn run_bench(args: &BenchArgs) -> Result<(), CliError> {
    let (seq, _) = ingest_input(&args.input, &args.ingest)?;
    let repr = pick_representation(args.policy.repr, &seq)?;
    let input_bits = input_payload_bits(&seq, repr)?;
    let dist = ingest::sample_distribution(&seq, args.policy.sample_size, args.policy.seed)
        .map_err(classify)?;

    println!("method,payload_bits,header_bytes,compression_ratio,wall_ms");
    for (name, mode) in [
        ("ours", Mode::Ours),
        ("vrle", Mode::VRle),
        ("drle", Mode::DRle),
        ("oracle", Mode::Exploratory),
    ] {
        let config = CodecConfig::new(args.policy.br, repr, mode).map_err(classify)?;
        let start = Instant::now();
        let g = select_set(&seq, &dist, &config)?;
        let container = codec::encode(&seq, &g, &config).map_err(classify)?;
        let bytes = container.serialize().map_err(classify)?;
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        let payload_bits = container.payload_bits().map_err(classify)?;
        // Keep the timing honest but the results trustworthy.
        let decoded = codec::decode(&SrleContainer::deserialize(&bytes).map_err(classify)?)
            .map_err(classify)?;
        if decoded != seq {
            return Err(CliError::Format(format!("round-trip mismatch for {name}")));
        }
        println!(
            "{name},{payload_bits},{},{},{elapsed:.3}",
            container.header_bytes(),
            ratio(input_bits, payload_bits)
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let result = match &cli.command {
        Command::Compress(args) => run_compress(args),
        Command::Decompress(args) => run_decompress(args),
        Command::Stats(args) => run_stats(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Bench(args) => run_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
