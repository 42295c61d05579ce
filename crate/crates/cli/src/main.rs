//! `brun`: command-line front end for the certified Brun-constant toolkit.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use brun_core::decimal::{parse_count, parse_down, parse_up};
use brun_core::divisor_error::{scan_c, GridSpec};
use brun_core::euler_product::{h_bound, twin_constant};
use brun_core::projection::{project_table, DEFAULT_B_ASSUMED};
use brun_core::rv_bound::{
    brun_upper, derive_params, BoundOptions, CensusInput, ParamInputs, Provenance, SqrtTerm, DEFAULT_CUTOFF_U,
    DEFAULT_WIDTH_TARGET,
};
use brun_core::sieve::{census, census_series, SieveConfig, TwinCensus};
use brun_core::tables::{extend_brun, load_table_dir, serialize_table, CensusTableEntry, FileDigest};
use brun_core::{Error, Interval};
use clap::{Args, Parser, Subcommand};
use num_rational::Rational64;
use serde::Serialize;

const EXIT_USAGE: u8 = 1;
const EXIT_COMPUTATION: u8 = 2;

/// Known count `pi2(10^12)`, paired with the default base enclosure.
const BASE_PI2_DEFAULT: &str = "1870585220";

#[derive(Parser, Debug)]
#[command(name = "brun", version, about = "Certified bounds for Brun's constant")]
struct Cli {
    /// Worker threads for sieving; results do not depend on it.
    #[arg(long, global = true, value_parser = positive_usize)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count twin primes up to a limit and enclose their reciprocal sum.
    Census(CensusArgs),
    /// Extend a base enclosure of B(x) through census tables.
    Extend(ExtendArgs),
    /// Scan |E(x)| x^alpha for the divisor-sum error.
    ScanC(ScanArgs),
    /// Bound H(-alpha) by a truncated Euler product with a rigorous tail.
    HBound(HBoundArgs),
    /// Enclose the twin prime constant from primes up to a cutoff.
    TwinConstant(TwinConstantArgs),
    /// Produce a certificate `lower <= B <= upper`.
    Certify(CertifyArgs),
    /// Heuristic upper bounds at x0 = 10^k (never rigorous).
    Project(ProjectArgs),
}

#[derive(Args, Debug)]
struct CensusArgs {
    #[arg(long, value_parser = count)]
    limit: u64,
    /// Segment bitmap size in bytes.
    #[arg(long, value_parser = positive_usize)]
    segment_size: Option<usize>,
    /// Also write a census table at regular thresholds up to the limit.
    #[arg(long)]
    emit_table: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BaseArgs {
    #[arg(long, value_parser = count, default_value = "1e12")]
    base_x: u64,
    #[arg(long, value_parser = count, default_value = BASE_PI2_DEFAULT)]
    base_pi2: u64,
    #[arg(long, default_value = "1.8065924")]
    base_lo: String,
    #[arg(long, default_value = "1.8065925")]
    base_hi: String,
}

#[derive(Args, Debug)]
struct ExtendArgs {
    #[command(flatten)]
    base: BaseArgs,
    #[arg(long, env = "BRUN_TABLES_DIR")]
    tables: PathBuf,
    /// Stop at this threshold instead of the last table entry.
    #[arg(long, value_parser = count)]
    to: Option<u64>,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long, value_parser = rational, default_value = "2/5")]
    alpha: Rational64,
    #[arg(long, value_parser = count, default_value = "1e5")]
    xmax: u64,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    offsets: u32,
}

#[derive(Args, Debug)]
struct HBoundArgs {
    #[arg(long, value_parser = count, default_value = "1e8")]
    cutoff: u64,
    #[arg(long, value_parser = rational, default_value = "2/5")]
    alpha: Rational64,
}

#[derive(Args, Debug)]
struct TwinConstantArgs {
    #[arg(long, value_parser = count, default_value = "1e6")]
    cutoff: u64,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    /// JSON census point (`CensusInput`) to splice at.
    #[arg(long, conflicts_with = "tables")]
    census: Option<PathBuf>,
    /// Census tables extending the base enclosure up to `--x0`.
    #[arg(long, env = "BRUN_TABLES_DIR")]
    tables: Option<PathBuf>,
    #[arg(long, value_parser = count, default_value = "4e18")]
    x0: u64,
    #[command(flatten)]
    base: BaseArgs,
    #[arg(long, value_parser = positive_f64, default_value_t = DEFAULT_CUTOFF_U)]
    cutoff_u: f64,
    #[arg(long, value_parser = positive_f64, default_value_t = DEFAULT_WIDTH_TARGET)]
    width_target: f64,
    /// Use the improved x^{1/2} coefficient and A9.
    #[arg(long)]
    improved: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ProjectArgs {
    #[arg(long, value_delimiter = ',', default_value = "19,20,80")]
    ks: Vec<u32>,
    #[arg(long, value_parser = positive_f64, default_value_t = DEFAULT_B_ASSUMED)]
    b_assumed: f64,
    #[arg(long)]
    json: bool,
}

fn count(s: &str) -> Result<u64, String> {
    parse_count(s).map_err(|e| e.to_string())
}

fn rational(s: &str) -> Result<Rational64, String> {
    s.parse().map_err(|_| format!("expected a fraction like 2/5, got {s:?}"))
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("expected a positive integer, got {s:?}")),
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_COMPUTATION,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn sieve_config(threads: Option<usize>) -> SieveConfig {
    let cfg = SieveConfig::default();
    match threads {
        Some(t) => cfg.with_threads(t),
        None => cfg,
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
}

fn base_census(base: &BaseArgs) -> CliResult<TwinCensus> {
    let lo = parse_down(&base.base_lo)?;
    let hi = parse_up(&base.base_hi)?;
    let brun_partial = Interval::new(lo, hi).map_err(|_| CliError::Usage(format!("--base-lo {lo} exceeds --base-hi {hi}")))?;
    Ok(TwinCensus { x: base.base_x, pi2: base.base_pi2, brun_partial })
}

fn base_provenance(base: &BaseArgs) -> Provenance {
    Provenance::new(
        "base_brun",
        format!("B({}) in [{}, {}] with pi2 = {}, external input", base.base_x, base.base_lo, base.base_hi, base.base_pi2),
    )
}

fn table_provenance(files: &[FileDigest]) -> impl Iterator<Item = Provenance> + '_ {
    files
        .iter()
        .map(|f| Provenance::new("census_table", f.name.clone()).with_hash(f.sha256.clone()))
}

#[derive(Serialize)]
struct ExtendReport {
    census: TwinCensus,
    brackets: usize,
    files: Vec<FileDigest>,
}

fn extend_through_tables(base: &BaseArgs, dir: &Path, to: Option<u64>) -> CliResult<ExtendReport> {
    let set = load_table_dir(dir)?;
    let last = match to {
        Some(x) => x,
        None => set.entries.last().map(|e| e.threshold).unwrap_or(base.base_x),
    };
    let span = set.span(base.base_x, last)?;
    let census = extend_brun(&base_census(base)?, span)?;
    Ok(ExtendReport { census, brackets: span.len().saturating_sub(1), files: set.files })
}

/// Thresholds `j * 10^n` up to `limit`, with `n` chosen to give at most a
/// thousand rows.
fn table_thresholds(limit: u64) -> Vec<(u64, u32)> {
    let mut n = 0u32;
    while limit / 10u64.pow(n) > 1000 {
        n += 1;
    }
    let step = 10u64.pow(n);
    (1..=limit / step).map(|j| (j, n)).collect()
}

fn run_census(args: &CensusArgs, threads: Option<usize>) -> CliResult<String> {
    let mut cfg = sieve_config(threads);
    if let Some(bytes) = args.segment_size {
        cfg = cfg.with_segment_bytes(bytes);
    }
    let result = census(args.limit, &cfg)?;
    if let Some(path) = &args.emit_table {
        let marks = table_thresholds(args.limit);
        let xs: Vec<u64> = marks.iter().map(|&(j, n)| j * 10u64.pow(n)).collect();
        let series = census_series(&xs, &cfg)?;
        let c = brun_core::rv_bound::twin_constant_default().mid();
        let entries = marks
            .iter()
            .zip(&series)
            .map(|(&(j, n), s)| {
                let pred = brun_core::projection::predict_pi2(s.x as f64, c).map_or(0.0, |p| p.round());
                CensusTableEntry::new(j, n, s.pi2, format!("{pred:.0}"))
            })
            .collect::<brun_core::Result<Vec<_>>>()?;
        write_file(path, &serialize_table(&entries))?;
    }
    Ok(to_json(&result))
}

fn run_certify(args: &CertifyArgs) -> CliResult<String> {
    let input = match (&args.census, &args.tables) {
        (Some(path), _) => {
            let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            let mut input: CensusInput = serde_json::from_slice(&bytes)
                .map_err(|source| CliError::Json { path: path.display().to_string(), source })?;
            let name = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
            input
                .provenance
                .push(Provenance::new("census_file", name).with_hash(brun_core::tables::sha256_hex(&bytes)));
            input
        }
        (None, Some(dir)) => {
            let report = extend_through_tables(&args.base, dir, Some(args.x0))?;
            let mut provenance = vec![base_provenance(&args.base)];
            provenance.extend(table_provenance(&report.files));
            CensusInput { census: report.census, rigorous: true, provenance }
        }
        (None, None) => {
            return Err(CliError::Usage("certify needs --census FILE or --tables DIR (or BRUN_TABLES_DIR)".into()));
        }
    };
    let params = derive_params(&ParamInputs { improved_a9: args.improved, ..ParamInputs::default() })?;
    let opts = BoundOptions {
        cutoff_u: args.cutoff_u,
        width_target: args.width_target,
        sqrt_term: if args.improved { SqrtTerm::Improved } else { SqrtTerm::Standard },
        ..BoundOptions::default()
    };
    let cert = brun_upper(&input, &params, &opts)?;
    let text = to_json(&cert);
    match &args.out {
        Some(path) => {
            write_file(path, &text)?;
            Ok(format!("lower {}\nupper {}\n", brun_core::decimal::format_down(cert.lower), brun_core::decimal::format_up(cert.upper)))
        }
        None => Ok(text),
    }
}

fn run_project(args: &ProjectArgs) -> CliResult<String> {
    let params = derive_params(&ParamInputs::default())?;
    let rows = project_table(&args.ks, args.b_assumed, &params, &BoundOptions::default())?;
    if args.json {
        return Ok(to_json(&rows));
    }
    let mut s = format!("# heuristic, not rigorous; B assumed {}\n", args.b_assumed);
    s.push_str(&format!("{:>4}  {:>12}  {:>10}  {:>8}\n", "k", "pi2_pred", "B_pred", "upper"));
    for r in &rows {
        s.push_str(&format!("{:>4}  {:>12.5e}  {:>10.5}  {:>8.4}\n", r.k, r.pi2_pred, r.b_pred, r.upper_pred));
    }
    Ok(s)
}

fn run(cli: Cli) -> CliResult<String> {
    match &cli.command {
        Command::Census(args) => run_census(args, cli.threads),
        Command::Extend(args) => Ok(to_json(&extend_through_tables(&args.base, &args.tables, args.to)?)),
        Command::ScanC(args) => {
            let grid = GridSpec { x_max: args.xmax, offsets_per_unit: args.offsets, ..GridSpec::default() };
            Ok(to_json(&scan_c(args.alpha, &grid)?))
        }
        Command::HBound(args) => Ok(to_json(&h_bound(args.cutoff, -args.alpha, &sieve_config(cli.threads))?)),
        Command::TwinConstant(args) => Ok(to_json(&twin_constant(args.cutoff, &sieve_config(cli.threads))?)),
        Command::Certify(args) => run_certify(args),
        Command::Project(args) => run_project(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(text) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
