//! `sts` — build, verify and tabulate real simple symplectic triple systems.
//!
//! Exit codes: 0 when every check passes, 1 on a verification failure,
//! 2 on usage, input or IO errors. `STS_THREADS` caps the worker pool.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sts_core::analysis::{analyze, default_mode};
use sts_core::envelope::classification_row;
use sts_core::export::{ExportRecord, Summary};
use sts_core::sts::{DEFAULT_SAMPLES, DEFAULT_SEED};
use sts_core::{build, representatives, CheckMode, Model, ModelLabel};

#[derive(Parser, Debug)]
#[command(name = "sts", version, about = "Exact workbench for real simple symplectic triple systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct a model, verify it and write its structure constants as JSON.
    Build {
        #[command(flatten)]
        label: LabelArgs,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Skip verification; the record then carries no summary.
        #[arg(long)]
        no_verify: bool,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// Verify a model given by family name or by a JSON record.
    Verify {
        /// A family name (see `sts table`) or the path of a JSON record.
        target: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// Compute the classification table and compare every row with the expected values.
    Table,
}

#[derive(Args, Debug)]
struct LabelArgs {
    /// Family name: special, orthogonal, symplectic, unitarian, quaternionic, g2, f4,
    /// e6split, e6nonsplit, e7split, e7sostar, e7so102, e8split, e8nonsplit.
    family: String,
    /// Rank parameter (special, symplectic, quaternionic).
    #[arg(long)]
    n: Option<usize>,
    /// Signature parameter (orthogonal, unitarian, e6nonsplit).
    #[arg(long)]
    p: Option<usize>,
    /// Signature parameter (orthogonal, unitarian).
    #[arg(long)]
    q: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Check mode; defaults to exhaustive for dim T ≤ 14 and sampled above.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Seed of the sampled checks.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random samples in sampled mode.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
}

impl CheckArgs {
    fn mode(&self, n: usize) -> CheckMode {
        let sampled = CheckMode::Sampled { seed: self.seed.unwrap_or(DEFAULT_SEED), count: self.samples };
        match self.mode {
            Some(Mode::Exhaustive) => CheckMode::Exhaustive,
            Some(Mode::Sampled) => sampled,
            None if self.seed.is_some() => sampled,
            None => match default_mode(n) {
                CheckMode::Exhaustive => CheckMode::Exhaustive,
                CheckMode::Sampled { .. } => sampled,
            },
        }
    }
}

/// Failure categories mapped onto the exit-code contract.
enum Failure {
    Verification,
    Usage(String),
}

impl From<sts_core::StsError> for Failure {
    fn from(e: sts_core::StsError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<sts_core::ExportError> for Failure {
    fn from(e: sts_core::ExportError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("STS_THREADS") else { return Ok(()) };
    let threads: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Usage(format!("STS_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn load_target(target: &str, n: Option<usize>, p: Option<usize>, q: Option<usize>) -> Result<Model, Failure> {
    let path = Path::new(target);
    if target.ends_with(".json") || path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{target}: {e}")))?;
        let rec = ExportRecord::from_json(&text)?;
        return match rec.to_model() {
            Ok(m) => Ok(m),
            // a record that parses but does not describe a valid system is a failed verification
            Err(sts_core::ExportError::System(e)) => {
                println!("{target}: {e}");
                println!("result: FAIL");
                Err(Failure::Verification)
            }
            Err(e) => Err(e.into()),
        };
    }
    Ok(build(ModelLabel::from_parts(target, n, p, q)?)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Build { label, out, no_verify, check } => {
            let l = ModelLabel::from_parts(&label.family, label.n, label.p, label.q)?;
            let model = build(l)?;
            let mode = check.mode(model.system.n());
            let analysis = (!no_verify).then(|| analyze(&model, mode));
            let summary = analysis.as_ref().and_then(Summary::from_analysis);
            let text = ExportRecord::from_model(&model, mode, summary).to_json()?;
            match &out {
                Some(path) => {
                    std::fs::write(path, &text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    eprintln!("wrote {} (dim {})", path.display(), model.system.n());
                }
                None => print!("{text}"),
            }
            match analysis {
                Some(a) if !a.passed() => {
                    eprintln!("verification failed: {}", a.first_failure().unwrap_or_default());
                    Err(Failure::Verification)
                }
                _ => Ok(()),
            }
        }
        Command::Verify { target, n, p, q, check } => {
            let model = load_target(&target, n, p, q)?;
            let a = analyze(&model, check.mode(model.system.n()));
            print!("{}", report::verification(&model, &a));
            if a.passed() {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Table => {
            let mut ok = true;
            println!("{}", report::table_header());
            for label in representatives() {
                let model = build(label)?;
                let a = analyze(&model, default_mode(model.system.n()));
                let row = classification_row(label);
                ok &= a.passed();
                println!("{}", report::table_line(&row, &a));
            }
            if ok {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
