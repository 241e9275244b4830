//! `rotbent` command-line tool.
//!
//! Exit status: 0 on success, 1 when a verification finds a violation, 2 on
//! usage, parse or configuration errors.

mod render;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rotbent::search::{Limits, SearchConfig, Suite, DEFAULT_BUDGET};
use rotbent::RotSymSpec;
use serde::Serialize;

use report::SearchKind;

#[derive(Parser)]
#[command(
    name = "rotbent",
    version,
    about = "Analyze and classify rotation symmetric Boolean functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree, weight, nonlinearity, bentness and structural invariants of a spec.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// SANF spec, e.g. "x0x3" or "1 + x0x1 + x0x2x4".
        spec: String,
    },
    /// Orbit representatives and sizes.
    Orbits {
        #[command(flatten)]
        common: Common,
        /// Report counts per orbit size only.
        #[arg(long)]
        count_only: bool,
    },
    /// Expand a spec into its full ANF and truth table.
    Expand {
        #[command(flatten)]
        common: Common,
        spec: String,
    },
    /// Search sums of SANF terms for bent functions.
    Search {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "homogeneous")]
        kind: SearchKind,
        /// Term degree for homogeneous searches.
        #[arg(long)]
        degree: Option<usize>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Run the classification checks; exits 1 on any violation.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[arg(long)]
        min_degree: Option<usize>,
        #[arg(long)]
        max_degree: Option<usize>,
        /// Skip the pass over arbitrary rotation symmetric functions.
        #[arg(long)]
        homogeneous_only: bool,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Properties of every single-term spec; CSV with --format csv.
    Census {
        #[command(flatten)]
        common: Common,
        /// Also scan every truth table (n = 2 or 4) and count bent functions.
        #[arg(long)]
        brute_force: bool,
    },
}

#[derive(Args)]
struct Common {
    /// Number of variables.
    #[arg(short = 'n')]
    n: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    threads: Option<usize>,
    /// Largest exhaustive enumeration allowed.
    #[arg(long, env = "ROTBENT_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct Sampling {
    /// Sample this many instances when a space is larger.
    #[arg(long)]
    samples: Option<u64>,
    /// Largest number of terms in a sum.
    #[arg(long)]
    max_terms: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: rotbent::Error| e.to_string())
}

enum Failure {
    /// Bad input or configuration: exit 2.
    Usage(String),
    /// A verification violation: exit 1, after the report is written.
    Violation,
}

impl From<rotbent::Error> for Failure {
    fn from(e: rotbent::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit<T: Serialize>(
    common: &Common,
    value: &T,
    text: impl FnOnce(&T) -> String,
) -> Result<(), Failure> {
    let body = match common.format {
        Format::Text => text(value),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            return Err(Failure::Usage(
                "csv output is only available for census".into(),
            ))
        }
    };
    write_out(common, &body)
}

fn write_out(common: &Common, body: &str) -> Result<(), Failure> {
    match &common.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn limits(common: &Common, sampling: &Sampling) -> Limits {
    Limits {
        budget: common.budget,
        samples: sampling.samples,
        max_terms: sampling.max_terms,
        seed: common.seed,
    }
}

fn setup(common: &Common) -> Result<(), Failure> {
    if let Some(threads) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::Usage(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Analyze { common, spec } => {
            setup(&common)?;
            let spec = RotSymSpec::parse(common.n, &spec)?;
            emit(&common, &report::analyze(&spec)?, render::analysis)
        }
        Command::Orbits { common, count_only } => {
            setup(&common)?;
            emit(
                &common,
                &report::orbits(common.n, count_only)?,
                render::orbits,
            )
        }
        Command::Expand { common, spec } => {
            setup(&common)?;
            let spec = RotSymSpec::parse(common.n, &spec)?;
            emit(&common, &report::expand(&spec), render::expansion)
        }
        Command::Search {
            common,
            kind,
            degree,
            sampling,
        } => {
            setup(&common)?;
            let result = report::search(common.n, kind, degree, &limits(&common, &sampling))?;
            emit(&common, &result, render::search)
        }
        Command::Verify {
            common,
            suite,
            min_degree,
            max_degree,
            homogeneous_only,
            sampling,
        } => {
            setup(&common)?;
            let mut config = SearchConfig::new(common.n, suite);
            config.min_degree = min_degree.unwrap_or(config.min_degree);
            config.max_degree = max_degree.unwrap_or(config.max_degree);
            config.homogeneous_only = homogeneous_only;
            config.max_terms = sampling.max_terms;
            config.samples = sampling.samples;
            config.seed = common.seed;
            config.budget = common.budget;
            let report = rotbent::search::verify_suite(&config)?;
            let passed = report.passed;
            let wrapped = report::Verification {
                command: "verify",
                report,
            };
            emit(&common, &wrapped, render::verification)?;
            if passed {
                Ok(())
            } else {
                Err(Failure::Violation)
            }
        }
        Command::Census {
            common,
            brute_force,
        } => {
            setup(&common)?;
            let census = report::census(common.n, brute_force)?;
            if common.format == Format::Csv {
                let body =
                    render::census_csv(&census).map_err(|e| Failure::Usage(e.to_string()))?;
                write_out(&common, &body)
            } else {
                emit(&common, &census, render::census)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
