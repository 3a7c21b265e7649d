use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rnl::{
    analyze_jobs, optimal_search, reports_to_csv, reports_to_json, reports_to_markdown,
    search_summary_json, verify_optimal_vs_perfect, write_census_jsonl, FunctionRef,
    NonlinearityReport, SearchScope, VectorialFunction,
};

mod input;
mod tables;

use input::{build_boolean, build_vectorial, parse_modulus, source_flag};

#[derive(Parser)]
#[command(
    name = "rnl",
    version,
    about = "Subspace-projection nonlinearity analysis for Boolean functions and S-boxes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify all rank-r projections of a function and report (N_f, H_f)
    Analyze(AnalyzeArgs),
    /// Print the Walsh spectrum of a Boolean function as exact fractions
    Spectrum(SpectrumArgs),
    /// Print a built-in S-box truth table as hex
    Sbox(SboxArgs),
    /// Scan a function space for the class with optimal nonlinearity
    Optimal(OptimalArgs),
    /// Recompute the built-in reference tables and check every cell
    Reproduce(ReproduceArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Single-bit output; distributions are over the support
    Boolean,
    /// Multi-bit output (S-box); distributions are over the graph
    Vectorial,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Copy, Clone, ValueEnum)]
pub enum SboxKind {
    /// Field inversion x^(2^k - 2) over GF(2^k)
    Inverse,
}

#[derive(Args)]
#[group(id = "source", required = true, multiple = false)]
pub struct SourceArgs {
    /// Algebraic normal form, e.g. "x1*x2 + x3" (boolean mode)
    #[arg(long)]
    anf: Option<String>,
    /// Truth table as a hex string
    #[arg(long)]
    tt: Option<String>,
    /// File containing the hex truth table (whitespace ignored)
    #[arg(long, value_name = "PATH")]
    tt_file: Option<PathBuf>,
    /// Built-in S-box family (vectorial mode)
    #[arg(long, value_enum)]
    sbox: Option<SboxKind>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[command(flatten)]
    source: SourceArgs,
    /// Number of inputs (required with --anf and vectorial --tt)
    #[arg(long)]
    n: Option<u32>,
    /// Number of outputs (vectorial --tt only)
    #[arg(long)]
    m: Option<u32>,
    /// Field degree for --sbox
    #[arg(long)]
    k: Option<u32>,
    /// Field modulus for --sbox, hex with the degree bit set (0x13 = x^4+x+1)
    #[arg(long)]
    modulus: Option<String>,
    /// Projection rank, a single value or an inclusive range like 1..4
    #[arg(long, value_parser = parse_r_spec)]
    r: RSpec,
    #[arg(long, value_enum, default_value = "md")]
    format: Format,
    /// Worker threads (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Write output to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Number of inputs (required with --anf)
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SboxArgs {
    /// Field degree
    #[arg(long)]
    k: u32,
    /// Field modulus, hex with the degree bit set (0x13 = x^4+x+1)
    #[arg(long)]
    modulus: String,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum FilterKind {
    /// Keep only balanced functions (every output equally often)
    Balanced,
}

#[derive(Args)]
struct OptimalArgs {
    /// Number of inputs
    #[arg(long)]
    n: u32,
    /// Number of outputs
    #[arg(long)]
    m: u32,
    /// Projection rank
    #[arg(long)]
    r: u32,
    /// Restrict the full sweep to a structural subset
    #[arg(long, value_enum)]
    filter: Option<FilterKind>,
    /// Scan only the hex truth tables listed in this file, one per line
    #[arg(long, value_name = "PATH", conflicts_with = "filter")]
    candidates_file: Option<PathBuf>,
    /// Write the full class census as JSON lines
    #[arg(long, value_name = "PATH")]
    census_out: Option<PathBuf>,
    /// Also scan for perfect nonlinear functions and compare the sets
    #[arg(long)]
    verify_pn: bool,
    /// Worker threads (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Write the summary to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Which built-in reference table to check
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    table: u8,
    /// Worker threads (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy)]
struct RSpec {
    lo: u32,
    hi: u32,
}

fn parse_r_spec(s: &str) -> Result<RSpec, String> {
    let parse_one = |part: &str| {
        part.trim()
            .parse::<u32>()
            .map_err(|_| format!("`{part}` is not a rank"))
    };
    let spec = match s.split_once("..") {
        Some((lo, hi)) => RSpec {
            lo: parse_one(lo)?,
            hi: parse_one(hi)?,
        },
        None => {
            let r = parse_one(s)?;
            RSpec { lo: r, hi: r }
        }
    };
    if spec.lo < 1 || spec.lo > spec.hi {
        return Err(format!("range {}..{} is empty or starts below 1", spec.lo, spec.hi));
    }
    Ok(spec)
}

fn jobs_or_default(jobs: Option<usize>) -> Result<usize, String> {
    match jobs {
        Some(0) => Err("--jobs: must be at least 1".into()),
        Some(j) => Ok(j),
        None => Ok(std::thread::available_parallelism()
            .map(|p| p.get())
            .unwrap_or(1)),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| format!("--out: {}: {e}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Analyze(args) => cmd_analyze(&args),
        Command::Spectrum(args) => cmd_spectrum(&args),
        Command::Sbox(args) => cmd_sbox(&args),
        Command::Optimal(args) => cmd_optimal(&args),
        Command::Reproduce(args) => cmd_reproduce(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<ExitCode, String> {
    let jobs = jobs_or_default(args.jobs)?;
    let flag = source_flag(&args.source);

    let reports: Vec<NonlinearityReport> = match args.mode {
        ModeArg::Boolean => {
            reject_vectorial_flags(args)?;
            let f = build_boolean(&args.source, args.n)?;
            analyze_all(FunctionRef::Boolean(&f), args.r, jobs, flag)?
        }
        ModeArg::Vectorial => {
            let f = build_vectorial(&args.source, args.n, args.m, args.k, &args.modulus)?;
            analyze_all(FunctionRef::Vectorial(&f), args.r, jobs, flag)?
        }
    };

    let text = match args.format {
        Format::Json => reports_to_json(&reports),
        Format::Csv => reports_to_csv(&reports),
        Format::Md => reports_to_markdown(&reports),
    };
    emit(&args.out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn reject_vectorial_flags(args: &AnalyzeArgs) -> Result<(), String> {
    if args.m.is_some() {
        return Err("--m: only valid with --mode vectorial".into());
    }
    if args.k.is_some() || args.modulus.is_some() {
        return Err("--k/--modulus: only valid with --sbox".into());
    }
    Ok(())
}

fn analyze_all(
    target: FunctionRef,
    r: RSpec,
    jobs: usize,
    source_flag: &str,
) -> Result<Vec<NonlinearityReport>, String> {
    (r.lo..=r.hi)
        .map(|r| {
            analyze_jobs(target, r, jobs).map_err(|e| match e {
                rnl::Error::EmptySupport => format!("{source_flag}: {e}"),
                rnl::Error::RankOutOfRange { .. } | rnl::Error::EnumerationTooLarge => {
                    format!("--r: {e}")
                }
                other => other.to_string(),
            })
        })
        .collect()
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<ExitCode, String> {
    if args.source.sbox.is_some() {
        return Err("--sbox: spectrum takes a boolean function; use --anf, --tt, or --tt-file".into());
    }
    let f = build_boolean(&args.source, args.n)?;
    let spectrum = rnl::walsh_spectrum(&f);
    let values: Vec<String> = (0..spectrum.len() as u32)
        .map(|a| spectrum.value(a).to_string())
        .collect();
    let json = serde_json::json!({
        "n": f.n(),
        "denominator": spectrum.denominator(),
        "numerators": spectrum.numerators(),
        "values": values,
        "classical_nonlinearity": rnl::classical_nonlinearity(&f),
    });
    let mut text = serde_json::to_string_pretty(&json).expect("spectrum serialization");
    text.push('\n');
    emit(&args.out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sbox(args: &SboxArgs) -> Result<ExitCode, String> {
    let modulus = parse_modulus(&args.modulus)?;
    let sbox = rnl::gf_inverse_sbox(args.k, modulus).map_err(|e| format!("--modulus: {e}"))?;
    emit(&args.out, &format!("{}\n", sbox.to_hex()))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_optimal(args: &OptimalArgs) -> Result<ExitCode, String> {
    let jobs = jobs_or_default(args.jobs)?;
    let candidates: Option<Vec<VectorialFunction>> = args
        .candidates_file
        .as_ref()
        .map(|path| {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("--candidates-file: {}: {e}", path.display()))?;
            text.lines()
                .map(str::trim)
                .filter(|line| !line.is_empty())
                .map(|line| {
                    VectorialFunction::from_hex(args.n, args.m, line)
                        .map_err(|e| format!("--candidates-file: line `{line}`: {e}"))
                })
                .collect()
        })
        .transpose()?;

    let balanced = |f: &VectorialFunction| f.is_balanced();
    let scope = match (&candidates, args.filter) {
        (Some(list), _) => SearchScope::Candidates(list),
        (None, Some(FilterKind::Balanced)) => SearchScope::Predicate(&balanced),
        (None, None) => SearchScope::All,
    };

    let describe = |e: rnl::Error| match e {
        rnl::Error::SpaceTooLarge { .. } => format!(
            "{e}; restrict the scan with --filter balanced or --candidates-file"
        ),
        rnl::Error::EmptyScope => format!("--candidates-file/--filter: {e}"),
        other => other.to_string(),
    };

    let result = optimal_search(args.n, args.m, args.r, scope, jobs).map_err(describe)?;
    if let Some(path) = &args.census_out {
        let mut buf = Vec::new();
        write_census_jsonl(&result, &mut buf).expect("census serialization");
        fs::write(path, buf).map_err(|e| format!("--census-out: {}: {e}", path.display()))?;
    }
    let pn = if args.verify_pn {
        Some(verify_optimal_vs_perfect(args.n, args.m, args.r, scope, jobs).map_err(describe)?)
    } else {
        None
    };
    emit(&args.out, &search_summary_json(&result, pn.as_ref()))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_reproduce(args: &ReproduceArgs) -> Result<ExitCode, String> {
    let jobs = jobs_or_default(args.jobs)?;
    let all_pass = tables::reproduce(args.table, jobs)?;
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
