//! The `mpchunk` command.
//!
//! Exit codes: 0 success, 1 invalid input complex, 2 verification mismatch,
//! 3 I/O, syntax or usage error.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use mpchunk_core::oracle::{
    check_equivalence, check_optimality, OracleError, MAX_COMPARABLE_PAIRS,
};
use mpchunk_core::reduce::chunk_reduce_unchecked;
use mpchunk_core::{validate, BifilteredComplex, FieldChar};
use thiserror::Error;

use crate::format::write_native;
use crate::off::Filters;
use crate::{load, parse_any, LoadError};

pub const EXIT_INVALID: u8 = 1;
pub const EXIT_MISMATCH: u8 = 2;
pub const EXIT_IO: u8 = 3;

/// Most mismatches or violations printed before eliding the rest.
const REPORT_LIMIT: usize = 20;

#[derive(Debug, Parser)]
#[command(
    name = "mpchunk",
    version,
    about = "Reduce bifiltered chain complexes by chunks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct InputOpts {
    /// Field characteristic, overriding the one in the file
    #[arg(long)]
    pub field: Option<u32>,
    /// Vertex coordinates used as filtration values for OFF input
    #[arg(long, default_value = "xy")]
    pub filters: Filters,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduce a complex and write the result
    Reduce {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        opts: InputOpts,
        /// Worker threads [default: available parallelism]
        #[arg(long, env = "MPCHUNK_THREADS")]
        threads: Option<usize>,
    },
    /// Check a reduced complex against its input with the brute-force oracle
    Verify {
        input: PathBuf,
        reduced: PathBuf,
        #[command(flatten)]
        opts: InputOpts,
        /// Run even when the grade grid exceeds the size limit
        #[arg(long)]
        force_large_grid: bool,
    },
    /// Print generator counts and the chunk size histogram
    Stats {
        input: PathBuf,
        #[command(flatten)]
        opts: InputOpts,
    },
    /// Convert any supported input to the one-critical text format
    Convert {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        opts: InputOpts,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("{path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("--field {0}: not a prime")]
    Field(u32),
    #[error(transparent)]
    Stdout(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Load(e) if e.is_validation() => EXIT_INVALID,
            _ => EXIT_IO,
        }
    }
}

fn field_of(opts: &InputOpts) -> Result<Option<FieldChar>, CliError> {
    opts.field
        .map(|p| FieldChar::new(p).map_err(|_| CliError::Field(p)))
        .transpose()
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// High-water mark of the resident set, where the platform reports one.
fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find_map(|l| l.strip_prefix("VmHWM:"))
        .and_then(|v| v.trim().trim_end_matches("kB").trim().parse().ok())
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Runs a parsed command, writing reports to `out`. Returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    match cli.command {
        Command::Reduce {
            input,
            output,
            opts,
            threads,
        } => {
            let field = field_of(&opts)?;
            let start = Instant::now();
            let loaded = load(&input, field, opts.filters)?;
            let t_prep = start.elapsed();
            let threads = threads.filter(|&t| t > 0).unwrap_or_else(default_threads);
            let start = Instant::now();
            let (reduced, stats) = chunk_reduce_unchecked(&loaded.complex, threads);
            let t_reduce = start.elapsed();
            write_file(&output, &write_native(&reduced))?;
            write!(
                out,
                "n={} m={} ell={} g={} additions={} t_prep={:.6} t_reduce={:.6}",
                stats.n,
                stats.m,
                stats.ell,
                stats.g,
                stats.column_additions(),
                t_prep.as_secs_f64(),
                t_reduce.as_secs_f64()
            )?;
            if let Some(kib) = peak_rss_kib() {
                write!(out, " peak_rss_kib={kib}")?;
            }
            writeln!(out)?;
            Ok(0)
        }
        Command::Verify {
            input,
            reduced,
            opts,
            force_large_grid,
        } => {
            let field = field_of(&opts)?;
            let c = load(&input, field, opts.filters)?.complex;
            let r = load(&reduced, field, opts.filters)?.complex;
            verify(&c, &r, force_large_grid, out)
        }
        Command::Stats { input, opts } => {
            let field = field_of(&opts)?;
            let text = std::fs::read_to_string(&input).map_err(|source| LoadError::Io {
                path: input.clone(),
                source,
            })?;
            let loaded = parse_any(&text, &input, field, opts.filters)?;
            stats(&loaded.complex, out)
        }
        Command::Convert {
            input,
            output,
            opts,
        } => {
            let field = field_of(&opts)?;
            let loaded = load(&input, field, opts.filters)?;
            write_file(&output, &write_native(&loaded.complex))?;
            writeln!(
                out,
                "wrote {} generators to {}",
                loaded.complex.len(),
                output.display()
            )?;
            Ok(0)
        }
    }
}

fn verify(
    c: &BifilteredComplex,
    r: &BifilteredComplex,
    force: bool,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let equivalence = match check_equivalence(c, r, force) {
        Ok(rep) => rep,
        Err(OracleError::GridTooLarge { pairs, limit }) => {
            writeln!(
                out,
                "verify skipped: grade grid has {pairs} comparable pairs (limit {limit}); \
                 pass --force-large-grid to run anyway"
            )?;
            return Ok(0);
        }
        Err(e) => {
            writeln!(out, "mismatch: {e}")?;
            return Ok(EXIT_MISMATCH);
        }
    };
    debug_assert!(force || equivalence.pairs <= MAX_COMPARABLE_PAIRS);
    let optimality = check_optimality(c, r).expect("fields already checked");

    if equivalence.ok() {
        writeln!(
            out,
            "equivalence: ok ({} grid points, {} comparable pairs)",
            equivalence.points, equivalence.pairs
        )?;
    } else {
        writeln!(
            out,
            "equivalence: {} mismatches",
            equivalence.mismatches.len()
        )?;
        for m in equivalence.mismatches.iter().take(REPORT_LIMIT) {
            writeln!(out, "  {m:?}")?;
        }
    }
    if optimality.ok() {
        writeln!(out, "optimality: ok ({} grades)", optimality.points_checked)?;
    } else {
        writeln!(
            out,
            "optimality: {} violations",
            optimality.violations.len()
        )?;
        for v in optimality.violations.iter().take(REPORT_LIMIT) {
            writeln!(
                out,
                "  grade {} dim {}: lower bound {}, generators {}",
                v.p, v.k, v.delta, v.gamma
            )?;
        }
    }
    Ok(if equivalence.ok() && optimality.ok() {
        0
    } else {
        EXIT_MISMATCH
    })
}

fn stats(c: &BifilteredComplex, out: &mut dyn Write) -> Result<u8, CliError> {
    let report = validate(c);
    let dims = c.dim_counts();
    let dims_field: Vec<String> = dims
        .iter()
        .enumerate()
        .map(|(k, n)| format!("{k}:{n}"))
        .collect();
    writeln!(
        out,
        "n={} m={} ell={} field={} dims={} valid={}",
        c.len(),
        c.chunk_count(),
        c.max_chunk_len(),
        c.field().characteristic(),
        dims_field.join(","),
        if report.ok() { "yes" } else { "no" }
    )?;
    writeln!(out)?;
    writeln!(out, "{:>5}  {:>10}", "dim", "generators")?;
    for (k, n) in dims.iter().enumerate() {
        writeln!(out, "{k:>5}  {n:>10}")?;
    }

    let mut histogram: BTreeMap<u32, usize> = BTreeMap::new();
    for r in c.chunks() {
        *histogram.entry(r.len().ilog2()).or_default() += 1;
    }
    writeln!(out)?;
    writeln!(out, "{:>13}  {:>8}", "chunk size", "chunks")?;
    for (b, count) in histogram {
        let (lo, hi) = (1usize << b, (1usize << (b + 1)) - 1);
        let label = if lo == hi {
            lo.to_string()
        } else {
            format!("{lo}-{hi}")
        };
        writeln!(out, "{label:>13}  {count:>8}")?;
    }

    if !report.ok() {
        writeln!(out)?;
        writeln!(out, "{} violations", report.violations.len())?;
        for v in report.violations.iter().take(REPORT_LIMIT) {
            writeln!(out, "  {:?} at column {}: {}", v.kind, v.column, v.detail)?;
        }
        return Ok(EXIT_INVALID);
    }
    Ok(0)
}

/// Entry point of the binary.
pub fn main_entry() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_IO)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let _ = out.flush();
            eprintln!("mpchunk: {e}");
            if let CliError::Load(LoadError::Invalid { report, .. }) = &e {
                for v in report.violations.iter().take(REPORT_LIMIT) {
                    eprintln!("  {:?} at column {}: {}", v.kind, v.column, v.detail);
                }
            }
            ExitCode::from(e.exit_code())
        }
    }
}
