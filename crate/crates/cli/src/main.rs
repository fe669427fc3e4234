mod config;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use equiweyl::lab::{run_suite, write_report, ExperimentReport, Verdict};
use equiweyl::Error;

use config::{plan, suite_plan, Plan, RunConfig};

/// Numerical experiments on equivariant local Weyl laws.
///
/// Exit status: 0 when every experiment passes, 1 on a failed or
/// inconclusive verdict, 2 on a configuration or usage error, 3 on a
/// resource or convergence error.
#[derive(Parser, Debug)]
#[command(name = "equiweyl", version)]
struct Cli {
    /// JSON run configuration; flags override its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Local equivariant Weyl law at a point.
    Weyl(Flags),
    /// Global counting function of an isotypic component.
    Counting(Flags),
    /// Concentration profile of zonal harmonics near the pole.
    Concentration(Flags),
    /// L^p norms of equivariant eigenfunctions.
    Lpnorms(Flags),
    /// Diagonal Kuznecov sums at random points.
    Kuznecov(Flags),
    /// Stationary phase checks on model integrals.
    Statphase(Flags),
    /// Decay of the hybrid oscillatory integral on and off the orbit.
    Hybrid(Flags),
    /// Uniformity of the interpolation between the two regimes.
    Interp(Flags),
    /// Critical manifold scan of the hybrid phase.
    Critscan(Flags),
    /// Run a batch of experiments.
    Suite {
        /// The full acceptance suite (the default).
        #[arg(long, conflicts_with = "quick")]
        all: bool,
        /// A reduced suite that finishes in seconds.
        #[arg(long)]
        quick: bool,
        /// Keep only these job ids.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        #[command(flatten)]
        flags: RunConfig,
    },
}

#[derive(clap::Args, Debug)]
struct Flags {
    #[command(flatten)]
    run: RunConfig,
}

fn usage_error(errors: &[String]) -> ExitCode {
    eprintln!("equiweyl: invalid configuration");
    for e in errors {
        eprintln!("  {e}");
    }
    ExitCode::from(2)
}

fn is_config_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Domain(_) | Error::Index(_) | Error::InvalidPoint(_) | Error::Parse(_) | Error::Truncation { .. }
    )
}

fn counting_line(r: &ExperimentReport) -> Option<String> {
    let last = |name: &str| r.series(name).and_then(|s| s.y.last().copied());
    Some(format!("count={} predicted={} dev={}", last("count")?, last("predicted")?, last("deviation")?))
}

fn execute(p: Plan) -> ExitCode {
    let start = Instant::now();
    let results = match run_suite(&p.suite, p.threads) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("equiweyl: {e}");
            return ExitCode::from(3);
        }
    };
    let mut code = 0u8;
    for (job, res) in p.suite.jobs.iter().zip(results) {
        match res {
            Ok(report) => {
                if p.counting_line {
                    if let Some(line) = counting_line(&report) {
                        println!("{line}");
                    }
                } else {
                    println!("{}", report.summary_line());
                }
                if let Err(e) = write_report(&p.out, &report) {
                    eprintln!("equiweyl: writing {} failed: {e}", job.id);
                    code = code.max(3);
                }
                if report.verdict != Verdict::Pass {
                    code = code.max(1);
                }
            }
            Err(e) => {
                eprintln!("equiweyl: {}: {e}", job.id);
                code = code.max(if is_config_error(&e) { 2 } else { 3 });
            }
        }
    }
    log::info!("{} experiment(s) in {:.1} s", p.suite.jobs.len(), start.elapsed().as_secs_f64());
    ExitCode::from(code)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let file = match &cli.config {
        Some(path) => match RunConfig::load(path) {
            Ok(c) => c,
            Err(e) => return usage_error(&e),
        },
        None => RunConfig::default(),
    };
    let planned = match &cli.command {
        Command::Suite { all: _, quick, only, flags } => suite_plan(&flags.over(&file), *quick, only),
        Command::Weyl(f) => plan("weyl", &f.run.over(&file)),
        Command::Counting(f) => plan("counting", &f.run.over(&file)),
        Command::Concentration(f) => plan("concentration", &f.run.over(&file)),
        Command::Lpnorms(f) => plan("lpnorms", &f.run.over(&file)),
        Command::Kuznecov(f) => plan("kuznecov", &f.run.over(&file)),
        Command::Statphase(f) => plan("statphase", &f.run.over(&file)),
        Command::Hybrid(f) => plan("hybrid", &f.run.over(&file)),
        Command::Interp(f) => plan("interp", &f.run.over(&file)),
        Command::Critscan(f) => plan("critscan", &f.run.over(&file)),
    };
    match planned {
        Ok(p) => execute(p),
        Err(e) => usage_error(&e),
    }
}
