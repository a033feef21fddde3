//! `knockout`: tournament fixing, win probabilities and model checks from
//! match data.
//!
//! Exit codes: 0 ok, 2 input error, 3 negative result (no winning draw),
//! 4 resource limit.

mod commands;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use input::InputArgs;
use output::Format;

#[derive(Debug, Parser, Serialize)]
#[command(name = "knockout", version, about = "Balanced knockout tournament analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Master seed for every random choice in the run.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Machine-readable output file.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Worker threads. Sampled results are reproducible for a fixed seed and
    /// worker count.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,

    /// Include wall-clock timings in machine output (makes it non-reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Find a draw the target player wins.
    Fix {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        target: String,
    },
    /// List draws the target player wins.
    Enumerate {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        target: String,
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Count the draws each player wins.
    Count {
        #[command(flatten)]
        input: InputArgs,
        /// Skip the per-player search statistics.
        #[arg(long)]
        no_search: bool,
    },
    /// Players who beat everyone directly or through one intermediary.
    Kings {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Probability of each player winning a uniformly random draw.
    Winprob {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = WinprobMethod::Exact)]
        method: WinprobMethod,
        #[arg(long, default_value_t = knockout::winprob::DEFAULT_SAMPLES)]
        samples: u64,
        #[arg(long, value_enum, default_value_t = Mode::PerDrawExact)]
        mode: Mode,
    },
    /// Write a Condorcet Random probability matrix.
    GenCr {
        #[arg(long)]
        players: usize,
        #[arg(long)]
        upset: f64,
    },
    /// KS-test win probabilities against Condorcet Random models over a grid
    /// of upset probabilities.
    Scan {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = knockout::stats::DEFAULT_STEP)]
        step: f64,
        #[arg(long, default_value_t = knockout::stats::DEFAULT_THRESHOLD)]
        threshold: f64,
    },
    /// Fit log-normal and power-law models to win probabilities and compare
    /// them with a likelihood ratio test.
    Fit {
        #[command(flatten)]
        input: InputArgs,
        /// Fixed power-law lower cutoff.
        #[arg(long, conflicts_with = "xmin_scan")]
        xmin: Option<f64>,
        /// Choose the power-law cutoff by minimum KS distance.
        #[arg(long)]
        xmin_scan: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WinprobMethod {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    PerDrawExact,
    FullSimulation,
}

pub enum Outcome {
    Ok,
    Negative,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.workers.max(1)).build();
    let result = match pool {
        Ok(pool) => pool.install(|| commands::run(&cli)),
        Err(e) => Err(e.into()),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            let resource = e
                .chain()
                .any(|c| matches!(c.downcast_ref::<knockout::Error>(), Some(knockout::Error::ResourceLimit(_))));
            ExitCode::from(if resource { 4 } else { 2 })
        }
    }
}
