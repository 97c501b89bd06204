//! `lipbelief` command-line front end.
//!
//! Exit codes: 0 when every checked property holds, 1 on a verified-property
//! violation, 2 on usage, schema or precondition errors.

mod commands;
mod output;
mod problem;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Format;
use problem::GridSpec;

#[derive(Debug, Parser)]
#[command(name = "lipbelief", version, about = "Uniform beliefs over moving polytopes: sweeps and Lipschitz checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep a built-in example and compare with its closed form.
    Example {
        #[arg(value_enum)]
        name: ExampleName,
        /// Exponent of the q-map.
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Problem file (JSON); optional for `body`.
        problem: Option<PathBuf>,
        /// Random pairs for the body suite.
        #[arg(long, default_value_t = 500)]
        samples: usize,
        /// Ambient dimension for the body suite.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Make every other body-suite pair a thin sliver.
        #[arg(long)]
        adversarial: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Sweep `phi(x) = E[theta(x, .)]` for the map, belief and theta of a problem file.
    Sweep {
        problem: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Grid search of the leader objective of a linear bilevel problem.
    Bilevel {
        problem: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ExampleName {
    Trapezoid,
    Qmap,
    Rotseg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Body,
    TvBound,
    Sandwich,
    W1,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// start:stop:count or log:start:stop:count.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<GridSpec>,
    #[arg(long)]
    seed: Option<u64>,
    /// Feasibility tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Rational arithmetic for bilevel maps.
    #[arg(long)]
    exact: bool,
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    GridSpec::parse(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Example { name, q, common } => commands::example(name, q, &common),
        Command::Verify { suite, problem, samples, dim, adversarial, common } => {
            commands::verify(suite, problem.as_deref(), samples, dim, adversarial, &common)
        }
        Command::Sweep { problem, common } => commands::sweep(&problem, &common),
        Command::Bilevel { problem, common } => commands::bilevel(&problem, &common),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
