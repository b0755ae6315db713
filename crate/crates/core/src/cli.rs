//! The `sdcode` command line.
//!
//! Exit codes: 0 on success (or "is SD"), 2 for a definitive negative answer
//! (not SD, undecodable, inconsistent), 1 for usage and I/O errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::algebra::{Algebra, AlgebraSpec};
use crate::codec::{self, CodecError};
use crate::construct::{self, ConstructError, ParityCheckMatrix};
use crate::sdcheck::{self, SdOptions};
use crate::search::{self, CoefficientSource, SearchConfig};

#[derive(Debug, Parser)]
#[command(name = "sdcode", version, about = "Sector-Disk erasure code construction, verification and search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a parity-check matrix from one of the explicit constructions.
    Construct(ConstructArgs),
    /// Exhaustively check the SD property of a matrix file.
    Verify(VerifyArgs),
    /// Encode data symbols into a stripe.
    Encode(EncodeArgs),
    /// Recover the missing (`?`) symbols of a stripe.
    Decode(DecodeArgs),
    /// Shorten a code to fewer stripe rows.
    Shorten(ShortenArgs),
    /// Monte Carlo search with shortening-based pruning.
    Search(SearchArgs),
}

#[derive(Debug, Clone, Args)]
struct AlgebraArgs {
    /// Binary field, e.g. `w=4,poly=0x13` (poly defaults per width).
    #[arg(long, value_name = "w=..,poly=0x..", conflicts_with = "ring")]
    field: Option<String>,
    /// Ring of binary polynomials modulo M_p(x), e.g. `p=17`.
    #[arg(long, value_name = "p=..")]
    ring: Option<String>,
}

impl AlgebraArgs {
    fn spec(&self) -> Result<AlgebraSpec, Failure> {
        let spec = match (&self.field, &self.ring) {
            (Some(f), None) => AlgebraSpec::from_field_flag(f),
            (None, Some(r)) => AlgebraSpec::from_ring_flag(r),
            _ => return Err(Failure::Usage("one of --field or --ring is required".into())),
        };
        spec.map_err(|e| Failure::Usage(e.to_string()))
    }

    fn build(&self) -> Result<Arc<Algebra>, Failure> {
        let spec = self.spec()?;
        Algebra::new(spec)
            .map(Arc::new)
            .map_err(|e| Failure::Usage(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Construction1,
    Construction2,
}

#[derive(Debug, Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    algebra: AlgebraArgs,
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(short = 'H', long = "matrix")]
    matrix: PathBuf,
    /// Worker threads (defaults to available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
    /// Report progress on stderr.
    #[arg(long)]
    progress: bool,
}

#[derive(Debug, Args)]
struct EncodeArgs {
    #[arg(short = 'H', long = "matrix")]
    matrix: PathBuf,
    #[arg(long)]
    data: PathBuf,
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct DecodeArgs {
    #[arg(short = 'H', long = "matrix")]
    matrix: PathBuf,
    #[arg(long)]
    stripe: PathBuf,
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct ShortenArgs {
    #[arg(short = 'H', long = "matrix")]
    matrix: PathBuf,
    #[arg(long)]
    r2: usize,
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    rmax: usize,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    algebra: AlgebraArgs,
    /// `random`, or inject `construction1` / `construction2` global rows.
    #[arg(long, default_value = "random")]
    coefficients: String,
    #[arg(long)]
    jobs: Option<usize>,
    /// Report file; defaults to stdout.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Negative(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Negative(_) => 2,
        }
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the CLI with explicit streams and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Construct(a) => cmd_construct(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Encode(a) => cmd_encode(a, out),
        Command::Decode(a) => cmd_decode(a, out),
        Command::Shorten(a) => cmd_shorten(a, out),
        Command::Search(a) => cmd_search(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            match &f {
                Failure::Usage(m) => {
                    let _ = writeln!(err, "error: {m}");
                }
                Failure::Negative(m) => {
                    let _ = writeln!(out, "{m}");
                }
            }
            f.code()
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

fn load_matrix(path: &Path) -> Result<ParityCheckMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    construct::parse_matrix(&text).map_err(|e| io_err(path, e))
}

fn save(path: &Path, write: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Result<(), Failure> {
    let mut buf = Vec::new();
    write(&mut buf).map_err(|e| io_err(path, e))?;
    fs::write(path, buf).map_err(|e| io_err(path, e))
}

fn emit(out: &mut dyn Write, line: std::fmt::Arguments<'_>) -> Result<(), Failure> {
    writeln!(out, "{line}").map_err(|e| Failure::Usage(format!("stdout: {e}")))
}

fn summary(pcm: &ParityCheckMatrix) -> String {
    let s = pcm.spec();
    format!(
        "{} n={} m={} s={} r={} over {} O(α)={} H={}x{}",
        s.family,
        s.n,
        s.m,
        s.s,
        s.r,
        s.algebra,
        pcm.algebra().order_of_alpha(),
        pcm.h().rows(),
        pcm.h().cols()
    )
}

fn cmd_construct(a: ConstructArgs, out: &mut dyn Write) -> Outcome {
    let alg = a.algebra.build()?;
    let built = match a.family {
        FamilyArg::Construction1 => construct::build_h1(a.r, a.n, &alg),
        FamilyArg::Construction2 => construct::build_h2(a.r, a.n, &alg),
    };
    let pcm = built.map_err(|e| match e {
        ConstructError::OrderTooSmall { .. } => Failure::Usage(format!("{e}; choose a larger field or ring")),
        other => Failure::Usage(other.to_string()),
    })?;
    save(&a.output, |buf| construct::write_matrix(&pcm, buf))?;
    emit(out, format_args!("{}", summary(&pcm)))?;
    emit(out, format_args!("wrote {}", a.output.display()))?;
    Ok(0)
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Outcome {
    let pcm = load_matrix(&a.matrix)?;
    let progress = |done: u64, total: u128| {
        eprintln!("checked {done}/{total}");
    };
    let opts = SdOptions {
        jobs: a.jobs,
        progress: if a.progress { Some(&progress) } else { None },
        ..Default::default()
    };
    let report = sdcheck::is_sd_with(&pcm, &opts).map_err(|e| Failure::Usage(e.to_string()))?;
    if report.sd {
        emit(out, format_args!("patterns={} sd=yes", report.patterns_checked))?;
        Ok(0)
    } else {
        let witness = report.witness.expect("failing report has a witness");
        Err(Failure::Negative(format!(
            "patterns={} sd=no\nwitness {witness}",
            report.patterns_checked
        )))
    }
}

fn codec_failure(e: CodecError) -> Failure {
    match e {
        CodecError::UndecodablePattern | CodecError::InconsistentSyndrome | CodecError::SingularParitySupport => {
            Failure::Negative(format!("error: {e}"))
        }
        other => Failure::Usage(other.to_string()),
    }
}

fn cmd_encode(a: EncodeArgs, out: &mut dyn Write) -> Outcome {
    let pcm = load_matrix(&a.matrix)?;
    let text = fs::read_to_string(&a.data).map_err(|e| io_err(&a.data, e))?;
    let data = codec::parse_data(&text, pcm.algebra()).map_err(|e| io_err(&a.data, e))?;
    let stripe = codec::encode(&pcm, &data).map_err(codec_failure)?;
    save(&a.output, |buf| codec::write_stripe(&stripe, pcm.algebra(), buf))?;
    emit(out, format_args!("encoded {} data symbols into {}", data.len(), a.output.display()))?;
    Ok(0)
}

fn cmd_decode(a: DecodeArgs, out: &mut dyn Write) -> Outcome {
    let pcm = load_matrix(&a.matrix)?;
    let text = fs::read_to_string(&a.stripe).map_err(|e| io_err(&a.stripe, e))?;
    let (stripe, _) = codec::parse_stripe(&text).map_err(|e| io_err(&a.stripe, e))?;
    codec::check_algebra(&pcm, stripe.spec.algebra).map_err(|e| Failure::Usage(e.to_string()))?;
    let missing = stripe.missing().len();
    let recovered = codec::decode(&pcm, &stripe).map_err(codec_failure)?;
    save(&a.output, |buf| codec::write_stripe(&recovered, pcm.algebra(), buf))?;
    emit(out, format_args!("recovered {missing} symbols into {}", a.output.display()))?;
    Ok(0)
}

fn cmd_shorten(a: ShortenArgs, out: &mut dyn Write) -> Outcome {
    let pcm = load_matrix(&a.matrix)?;
    let short = sdcheck::shorten(&pcm, a.r2).map_err(|e| Failure::Usage(e.to_string()))?;
    save(&a.output, |buf| construct::write_matrix(&short, buf))?;
    emit(out, format_args!("{}", summary(&short)))?;
    emit(out, format_args!("wrote {}", a.output.display()))?;
    Ok(0)
}

fn cmd_search(a: SearchArgs, out: &mut dyn Write) -> Outcome {
    let source: CoefficientSource = a.coefficients.parse().map_err(Failure::Usage)?;
    let cfg = SearchConfig {
        n: a.n,
        m: a.m,
        s: a.s,
        r_max: a.rmax,
        trials: a.trials,
        seed: a.seed,
        algebra: a.algebra.spec()?,
        source,
        jobs: a.jobs,
    };
    let records = search::run_search(&cfg).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut report = String::new();
    for rec in &records {
        report.push_str(&rec.to_string());
        report.push('\n');
    }
    match &a.output {
        Some(path) => {
            fs::write(path, &report).map_err(|e| io_err(path, e))?;
            let best = records.iter().map(|r| r.achieved_r).max().unwrap_or(0);
            emit(out, format_args!("{} trials, best achieved_r={best}, wrote {}", records.len(), path.display()))?;
        }
        None => out
            .write_all(report.as_bytes())
            .map_err(|e| Failure::Usage(format!("stdout: {e}")))?,
    }
    Ok(0)
}
