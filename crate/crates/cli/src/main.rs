mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime};

use clap::{Args, Parser, Subcommand};
use lcs_core::verify::Status;
use lcs_core::Error;
use serde::Serialize;

use output::{emit, render, Format, RunInfo};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

#[derive(Parser, Debug, Serialize)]
#[command(name = "lcs-lab", version, about = "Lower central series and derived series experiments in F2")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Serialize)]
pub struct Global {
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Seed for every pseudo-random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Largest word the construction may build.
    #[arg(long, global = true, default_value_t = lcs_core::construction::DEFAULT_LETTER_BUDGET)]
    pub budget_letters: usize,
    /// Wall-clock budget for each search.
    #[arg(long, global = true)]
    pub budget_seconds: Option<f64>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Command {
    /// Build aₙ, bₙ from the seed pair.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, requires = "seed_b")]
        seed_a: Option<String>,
        #[arg(long, requires = "seed_a")]
        seed_b: Option<String>,
    },
    /// Lower central series depth through the Magnus expansion.
    Depth {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = lcs_core::magnus::DEFAULT_TRUNCATION)]
        max_degree: usize,
    },
    /// Girth of Λ or [Λ,Λ] for a quotient F₂ → Q.
    Girth {
        /// z2, perm:<a=..;b=..>, lcs:<n>, derived2 or derived:<quotient>.
        #[arg(long)]
        quotient: String,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        no_prune: bool,
        #[arg(long, default_value_t = lcs_core::search::DEFAULT_SHARDS)]
        shards: usize,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// α(n): girth of γₙ(F₂).
    Alpha {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_len: usize,
        /// Truncation degree for re-checking the witness; defaults to n.
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value_t = lcs_core::search::DEFAULT_SHARDS)]
        shards: usize,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// β(n) bracketed between 3ⁿ and ℓ(bₙ).
    Beta {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 14)]
        max_len: usize,
        #[arg(long, default_value_t = lcs_core::search::DEFAULT_SHARDS)]
        shards: usize,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Run the check battery and print one row per check.
    Verify {
        /// Comma-separated check numbers; all when absent.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Decay of L_k along wₙ = aₙ(w, v).
    Almostlaw {
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 200)]
        polish_steps: usize,
        #[arg(long, default_value_t = 0.01)]
        certify_eps: f64,
        #[arg(long, requires = "seed_b")]
        seed_a: Option<String>,
        #[arg(long, requires = "seed_a")]
        seed_b: Option<String>,
        /// Longest candidate when searching for seeds.
        #[arg(long, default_value_t = 16)]
        seed_max_len: usize,
        /// Use this bound for both seeds instead of certifying them.
        #[arg(long)]
        assume_seed_bound: Option<f64>,
    },
    /// Constants, α and β tables.
    Report {
        #[arg(long, default_value_t = 4)]
        alpha_n_max: usize,
        #[arg(long, default_value_t = 16)]
        alpha_max_len: usize,
        #[arg(long, default_value_t = 14)]
        beta_max_len: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen { .. } => "gen",
            Command::Depth { .. } => "depth",
            Command::Girth { .. } => "girth",
            Command::Alpha { .. } => "alpha",
            Command::Beta { .. } => "beta",
            Command::Verify { .. } => "verify",
            Command::Almostlaw { .. } => "almostlaw",
            Command::Report { .. } => "report",
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::Almostlaw { .. } => Format::Csv,
            _ => Format::Json,
        }
    }
}

pub fn exit_code(status: Status) -> u8 {
    match status {
        Status::Pass => EXIT_OK,
        Status::Fail => EXIT_FAILURE,
        Status::Inconclusive | Status::Skipped => EXIT_INCONCLUSIVE,
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::NotReduced { .. }
        | Error::NotCyclicallyReduced(_)
        | Error::InvalidArgument(_) => EXIT_USAGE,
        Error::LengthBudget { .. }
        | Error::SeriesBudget { .. }
        | Error::NetBudget { .. }
        | Error::Interrupted(_) => EXIT_INCONCLUSIVE,
        _ => EXIT_FAILURE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let workers = cli
        .global
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if workers == 0 {
        eprintln!("error: --workers must be positive");
        return ExitCode::from(EXIT_USAGE);
    }
    if rayon::ThreadPoolBuilder::new().num_threads(workers).build_global().is_err() {
        eprintln!("error: could not start {workers} workers");
        return ExitCode::from(EXIT_FAILURE);
    }
    let started = SystemTime::now();
    let clock = Instant::now();
    let out = match commands::run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(error_code(&e));
        }
    };
    let info = RunInfo {
        command: cli.command.name(),
        config: serde_json::to_value(&cli).unwrap_or_default(),
        workers,
        started,
        wall_clock_secs: clock.elapsed().as_secs_f64(),
    };
    let format = cli.global.format.unwrap_or_else(|| cli.command.default_format());
    let bytes = match render(&out, &info, format) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAILURE);
        }
    };
    if let Err(e) = emit(&bytes, cli.global.out.as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_FAILURE);
    }
    ExitCode::from(exit_code(out.status))
}
