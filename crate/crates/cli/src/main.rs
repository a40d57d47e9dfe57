mod commands;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "afl", version, about = "Both sides of the linear AFL for GL4, computed exactly")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Worker threads for the parallel oracles (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Record wall-clock time in the report (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Geometric intersection number N(v/h).
    Intersect {
        #[arg(long, default_value_t = 2)]
        h: u32,
        #[arg(long)]
        v: u32,
        /// Substitute a numeric q.
        #[arg(long)]
        q: Option<i64>,
    },
    /// Orbital-integral polynomial and its derivative statistic.
    Orbital {
        #[arg(long)]
        v: u32,
        #[arg(long)]
        q: Option<i64>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 39)]
        v_max: u32,
        /// Seed for the randomized identity suite.
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
    /// Brute-force counting oracles.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
    /// Table of N(v/2) and N'(v/2) for odd v up to --v-max.
    Table {
        #[arg(long)]
        v_max: u32,
        #[arg(long)]
        q: Option<i64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identities,
    Geometry,
    Orbital,
    Afl,
    Oracle,
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Stable lattices of the matched pair, modulo the commutant units.
    Lattices(LatticeArgs),
    /// Matrices over F_Q[t]/(t^N) bucketed by determinant valuation.
    Matcount {
        #[arg(long)]
        a: usize,
        /// Residue field order Q.
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 3)]
        prec: usize,
    },
    /// The unramified h = 1 class statistic.
    Classstat {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 3)]
        prec: usize,
    },
}

#[derive(Args, Debug)]
pub struct LatticeArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub v: usize,
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub prec: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .expect("thread pool is configured once");
    }
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    match commands::run(&cli.command, echo) {
        Ok(mut report) => {
            if cli.timing {
                report.wall_clock_ms = Some(start.elapsed().as_millis());
            }
            let text = match cli.format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            print!("{text}");
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(commands::Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
