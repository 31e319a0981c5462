use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use simplex_spectra::eigensolve::{enumerate_2d, multi_start, Spectrum2d, DEFAULT_MAX_ITER, DEFAULT_TOL};
use simplex_spectra::frames::{certify, odeco_tensor, orthonormal_frame, regular_simplex_frame, simplex_tensor};
use simplex_spectra::harness::{
    conjecture_check, emit_report, sweep, unix_timestamp, ConjectureOptions, ConjectureVerdict, ReportFormat,
};
use simplex_spectra::io::{self, FrameFile, PairFile, PairListFile, ReportFile, TensorFile};
use simplex_spectra::stability::{analyze, StabilityOptions};
use simplex_spectra::tensor::{capacity_from_env, SymmetricTensor};
use simplex_spectra::Result;

const EXIT_USAGE: u8 = 1;
const EXIT_VIOLATION: u8 = 2;
const EXIT_STRICT: u8 = 3;

#[derive(Parser)]
#[command(name = "simplex-spectra", version, about = "Z-eigenpairs and robustness of frame tensors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    Frame(FrameCmd),
    #[command(subcommand)]
    Tensor(TensorCmd),
    #[command(subcommand)]
    Eig(EigCmd),
    /// Closed-form vs numerical robustness of simplex frame vectors over an (n, m) grid.
    Sweep(SweepArgs),
    /// Search a simplex tensor for robust eigenpairs that are not frame vectors.
    Conjecture(ConjectureArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FrameKind {
    Simplex,
    Orthonormal,
}

#[derive(Subcommand)]
enum FrameCmd {
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "simplex")]
        kind: FrameKind,
        #[arg(long)]
        out: PathBuf,
    },
    Certify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TensorKind {
    Simplex,
    Odeco,
}

#[derive(Subcommand)]
enum TensorCmd {
    Build {
        #[arg(long, value_enum)]
        kind: TensorKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Write the full n^m array instead of the rank-one terms.
        #[arg(long)]
        dense: bool,
        /// Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum EigCmd {
    Solve {
        #[arg(long)]
        tensor: PathBuf,
        #[arg(long, default_value_t = 1000)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[arg(long)]
        out: PathBuf,
    },
    Enumerate2d {
        #[arg(long)]
        tensor: PathBuf,
        #[arg(long, default_value_t = 3600)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    Classify {
        #[arg(long)]
        tensor: PathBuf,
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_parser = parse_range, default_value = "2..6")]
    n: RangeInclusive<usize>,
    #[arg(long, value_parser = parse_range, default_value = "3..6")]
    m: RangeInclusive<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: PathBuf,
    /// Exit with status 3 if any row breaks a sweep invariant.
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args)]
struct ConjectureArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 2000)]
    starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Inclusive range written `a..b`, `a..=b` or a single `a`.
fn parse_range(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok(lo..=hi)
}

fn load_tensor(path: &Path) -> Result<SymmetricTensor> {
    io::read_json::<TensorFile>(path)?.into_tensor(capacity_from_env())
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Frame(FrameCmd::Build { n, kind, out }) => {
            let frame = match kind {
                FrameKind::Simplex => regular_simplex_frame(n)?,
                FrameKind::Orthonormal => orthonormal_frame(n)?,
            };
            io::write_json(&out, &FrameFile::from(&frame))?;
        }
        Command::Frame(FrameCmd::Certify { input, tol }) => {
            let frame = io::read_json::<FrameFile>(&input)?.into_frame()?;
            println!("{}", io::to_string(&certify(&frame, tol)?)?);
        }
        Command::Tensor(TensorCmd::Build { kind, n, m, dense, out }) => {
            let mut t = match kind {
                TensorKind::Simplex => simplex_tensor(n, m)?,
                TensorKind::Odeco => odeco_tensor(n, m)?,
            };
            if dense {
                t = t.densify_capped(capacity_from_env())?;
            }
            let file = TensorFile::from(&t);
            match out {
                Some(path) => io::write_json(&path, &file)?,
                None => println!("{}", io::to_string(&file)?),
            }
        }
        Command::Eig(EigCmd::Solve { tensor, starts, seed, tol, max_iter, out }) => {
            let s = load_tensor(&tensor)?;
            let summary = multi_start(&s, starts, seed, tol, max_iter)?;
            eprintln!(
                "{} pairs; {} of {starts} starts did not converge, {} unrecovered",
                summary.pairs.len(),
                summary.failures,
                summary.unrecovered
            );
            let pairs = summary
                .counts()
                .map(|c| PairFile { basin_count: Some(c.count), ..PairFile::from(c.pair) })
                .collect();
            io::write_json(&out, &PairListFile { tensor: TensorFile::from(&s), pairs, seed: Some(seed) })?;
        }
        Command::Eig(EigCmd::Enumerate2d { tensor, grid, out }) => {
            let s = load_tensor(&tensor)?;
            let spectrum = enumerate_2d(&s, grid)?;
            if let Spectrum2d::Circle { lambda, .. } = &spectrum {
                eprintln!("every unit vector is an eigenvector (lambda = {lambda}); writing grid samples");
            }
            let pairs = spectrum.pairs().iter().map(PairFile::from).collect();
            io::write_json(&out, &PairListFile { tensor: TensorFile::from(&s), pairs, seed: None })?;
        }
        Command::Eig(EigCmd::Classify { tensor, pairs, out }) => {
            let s = load_tensor(&tensor)?;
            let list: PairListFile = io::read_json(&pairs)?;
            let opts = StabilityOptions::default();
            let reports = list
                .pairs
                .into_iter()
                .map(|p| Ok(ReportFile::from(&analyze(&s, &p.into_pair(&s)?, &opts)?)))
                .collect::<Result<Vec<_>>>()?;
            io::write_json(&out, &reports)?;
        }
        Command::Sweep(args) => {
            let rows = sweep(args.n, args.m)?;
            let format = match args.format {
                Format::Csv => ReportFormat::Csv,
                Format::Json => ReportFormat::Json,
            };
            let stamp = (!args.no_timestamp).then(unix_timestamp);
            emit_report(&rows, format, &args.out, stamp)?;
            let violations: Vec<String> = rows.iter().flat_map(|r| r.violations()).collect();
            for v in &violations {
                eprintln!("invariant violated: {v}");
            }
            if args.strict && !violations.is_empty() {
                return Ok(EXIT_STRICT);
            }
        }
        Command::Conjecture(args) => {
            let opts = ConjectureOptions::new(args.starts, args.seed);
            let mut report = conjecture_check(args.n, args.m, &opts)?;
            report.generated_at = (!args.no_timestamp).then(unix_timestamp);
            io::write_json(&args.out, &report)?;
            if let ConjectureVerdict::Violation { reason, .. } = &report.verdict {
                eprintln!("violation: {reason}");
                return Ok(EXIT_VIOLATION);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
