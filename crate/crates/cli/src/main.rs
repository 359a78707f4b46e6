//! `isl` — command-line frontend for the invariant-set simulation lab.
//!
//! Every subcommand is deterministic in its arguments and seed, emits JSON
//! (schema `isl/1`) or CSV, and follows a three-value exit-code contract:
//! 0 on success, 2 when a requested configuration is undefinable at the bit
//! budget, 64 on usage errors.

mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

pub const SCHEMA: &str = "isl/1";
pub const SEED_ENV: &str = "ISL_SEED";

pub const EXIT_UNDEFINABLE: u8 = 2;
pub const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "isl",
    about = "Finite-precision hidden-variable qubit simulations and fractal dynamics",
    version
)]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Args, Clone)]
pub struct RunConfig {
    /// Bit budget N (string length 2^N); commands that do not use exact
    /// arithmetic ignore it.
    #[arg(long = "n-bits", global = true)]
    pub n_bits: Option<u32>,
    /// Seed for ensemble construction. Defaults to 0; the ISL_SEED
    /// environment variable overrides the default (an explicit flag wins).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output format.
    #[arg(long, global = true, value_parser = ["json", "csv"])]
    pub format: Option<String>,
    /// Write output to this file (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
pub enum Command {
    /// CHSH experiment harness.
    #[command(subcommand)]
    Chsh(ChshCommand),
    /// Map between operator parameters and qubit state descriptors.
    #[command(subcommand)]
    Qubit(QubitCommand),
    /// Classify cos(pi * p/q) as rational or irrational.
    Niven {
        /// Numerator of phi/pi.
        p: i128,
        /// Denominator of phi/pi.
        q: i128,
    },
    /// Evaluate the doubling sequence 2cos(2^k * pi * p/q).
    Doubling {
        p: i128,
        q: i128,
        /// Largest k in the sequence.
        #[arg(long, default_value_t = 20)]
        k_max: u32,
    },
    /// Dynamical-systems toolkit.
    #[command(subcommand)]
    Dynsys(DynsysCommand),
}

#[derive(Subcommand)]
pub enum ChshCommand {
    /// Snap angles, build four disjoint sub-ensembles, report correlations
    /// and the S statistic.
    Run {
        /// Instrument angles a1,a2,b1,b2 in degrees.
        #[arg(long, value_delimiter = ',', num_args = 4, default_value = "0,90,45,135")]
        angles: Vec<f64>,
        /// Exact pair cosines c11,c12,c21,c22 (dyadic fractions such as
        /// 46341/65536); bypasses snapping and may yield an undefinable
        /// verdict (exit code 2).
        #[arg(long, value_delimiter = ',', num_args = 4, conflicts_with = "angles")]
        cos: Option<Vec<String>>,
        /// Apex angle at Alice's chosen point, as a fraction of pi.
        #[arg(long, default_value = "1/4")]
        apex_alice: String,
        /// Apex angle at Bob's chosen point, as a fraction of pi.
        #[arg(long, default_value = "1/4")]
        apex_bob: String,
    },
    /// Joint (common-ensemble) definability analysis of a configuration.
    Definability {
        #[arg(long, value_delimiter = ',', num_args = 4, default_value = "0,90,45,135")]
        angles: Vec<f64>,
        #[arg(long, default_value = "1/4")]
        apex_alice: String,
        #[arg(long, default_value = "1/4")]
        apex_bob: String,
    },
}

#[derive(Subcommand)]
pub enum QubitCommand {
    /// Map operator parameters to a state descriptor (give --alpha/--beta)
    /// or invert a descriptor (give --cos-half-sq/--phase). Inversion exits
    /// with code 2 when the state is undefinable at the budget.
    Map {
        /// Operator parameter alpha (dyadic, e.g. 1 or 3/4).
        #[arg(long)]
        alpha: Option<String>,
        /// Operator parameter beta (dyadic in [0,4)).
        #[arg(long, requires = "alpha")]
        beta: Option<String>,
        /// cos^2(theta/2) as an exact rational, e.g. 1/2 (any denominator).
        #[arg(long, conflicts_with = "alpha")]
        cos_half_sq: Option<String>,
        /// Phase phi/pi as an exact rational.
        #[arg(long, requires = "cos_half_sq")]
        phase: Option<String>,
    },
}

#[derive(Subcommand)]
pub enum DynsysCommand {
    /// Planar limit-cycle flow (attracting unit circle); CSV t,x,y.
    LimitCycle {
        #[arg(long, default_value_t = 0.1)]
        r0: f64,
        /// Initial angle in radians.
        #[arg(long, default_value_t = 0.0)]
        theta0: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long, default_value_t = 100.0)]
        horizon: f64,
    },
    /// Lorenz flow; CSV t,x,y,z with horizon/step rows.
    Lorenz {
        #[arg(long, default_value_t = 10.0)]
        sigma: f64,
        #[arg(long, default_value_t = 28.0)]
        r: f64,
        #[arg(long, default_value_t = 8.0 / 3.0)]
        b: f64,
        /// Initial state x,y,z.
        #[arg(long, value_delimiter = ',', num_args = 3, default_value = "1,1,1")]
        x0: Vec<f64>,
        #[arg(long, default_value_t = 0.001)]
        step: f64,
        #[arg(long, default_value_t = 50.0)]
        horizon: f64,
    },
    /// Finite Cantor iterate: interval list and exact measure.
    Cantor {
        #[arg(long, default_value_t = 3)]
        base: u32,
        /// Digits kept at each level.
        #[arg(long, value_delimiter = ',', default_value = "0,2")]
        digits: Vec<u8>,
        #[arg(long, default_value_t = 2)]
        depth: u32,
    },
    /// Delay-coordinate embedding of a scalar series from a CSV column.
    Takens {
        /// Input CSV (a header row is detected and skipped).
        #[arg(long = "input", visible_alias = "in")]
        input: std::path::PathBuf,
        /// Zero-based column holding the scalar series.
        #[arg(long, default_value_t = 0)]
        column: usize,
        /// Delay in samples; 0 selects the first autocorrelation minimum.
        #[arg(long, default_value_t = 0)]
        delay: usize,
        #[arg(long, default_value_t = 3)]
        dimension: usize,
    },
    /// Fractal dimension estimate of a point set read from CSV columns.
    Dimension {
        #[arg(long = "input", visible_alias = "in")]
        input: std::path::PathBuf,
        /// Zero-based columns forming the points (default: all).
        #[arg(long, value_delimiter = ',')]
        columns: Option<Vec<usize>>,
        #[arg(long, value_parser = ["box", "correlation"], default_value = "box")]
        method: String,
        /// Geometric scale sweep lo:hi:count, or an explicit comma list.
        #[arg(long, default_value = "0.4:4:8")]
        scales: String,
    },
}

/// How the effective seed was chosen, echoed in output metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedSource {
    Flag,
    Env,
    Default,
}

pub fn resolve_seed(flag: Option<u64>) -> Result<(u64, SeedSource), CliError> {
    if let Some(s) = flag {
        return Ok((s, SeedSource::Flag));
    }
    match std::env::var(SEED_ENV) {
        Ok(raw) => raw
            .trim()
            .parse::<u64>()
            .map(|s| (s, SeedSource::Env))
            .map_err(|_| CliError::usage(format!("{SEED_ENV} must be an unsigned integer, got {raw:?}"))),
        Err(_) => Ok((0, SeedSource::Default)),
    }
}

/// CLI-level failure: everything maps onto the exit-code contract.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unreadable inputs, impossible requests: exit 64.
    Usage(String),
    /// The configuration asks for something no budget-N sample space
    /// carries: exit 2, verdict JSON on stdout.
    Undefinable(serde_json::Value),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successes; everything else is usage.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Undefinable(verdict)) => {
            println!("{}", serde_json::to_string_pretty(&verdict).unwrap());
            ExitCode::from(EXIT_UNDEFINABLE)
        }
    }
}
