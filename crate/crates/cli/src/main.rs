use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Norms, operators and statement checks for variable-exponent spaces.
#[derive(Parser, Debug)]
#[command(name = "varexp", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Experiment config (JSON); built-in defaults otherwise.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write machine-readable results here.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write per-scale breakdowns or witnesses here.
    #[arg(long, global = true, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Override the numerical tolerance.
    #[arg(long, global = true, value_name = "FLOAT")]
    tol: Option<f64>,
    /// Seed for randomized banks.
    #[arg(long, global = true, value_name = "INT")]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Luxemburg norm of a catalog function.
    Norm {
        /// Function name from the config catalog.
        #[arg(long = "f", value_name = "NAME")]
        f: String,
        /// Exponent name from the config; its `exponent` field otherwise.
        #[arg(long = "p", value_name = "NAME")]
        p: Option<String>,
        /// Restrict to the ball B(0, R).
        #[arg(long, value_name = "R")]
        radius: Option<f64>,
    },
    /// Hardy-type operators sampled at points.
    Op {
        #[arg(long, value_enum)]
        kind: OpKind,
        /// Function name from the config catalog.
        #[arg(long = "f", value_name = "NAME")]
        f: String,
        /// Symbol for the commutators.
        #[arg(long = "b", value_name = "NAME")]
        b: Option<String>,
        /// Sample points, comma separated.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        x: Vec<f64>,
    },
    /// Central BMO norm over the radius grid.
    Cbmo {
        /// Function name from the config catalog.
        #[arg(long = "f", value_name = "NAME")]
        f: String,
        /// Exponent name from the config; its `exponent` field otherwise.
        #[arg(long = "p", value_name = "NAME")]
        p: Option<String>,
        #[arg(long, value_enum, default_value = "var")]
        rule: CbmoRule,
        /// Index of the classical norm.
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        /// Centre for `--rule constant`.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        c: f64,
    },
    /// Homogeneous Herz norm.
    Herz {
        /// Function name from the config catalog.
        #[arg(long = "f", value_name = "NAME")]
        f: String,
        /// Exponent name from the config; its `exponent` field otherwise.
        #[arg(long = "p", value_name = "NAME")]
        p: Option<String>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        /// Ring range; defaults to the config's `grids.k_range`.
        #[arg(long, allow_hyphen_values = true)]
        k_min: Option<i32>,
        #[arg(long, allow_hyphen_values = true)]
        k_max: Option<i32>,
    },
    /// Run statement checks.
    Verify {
        /// Statement id, repeatable.
        #[arg(long, value_name = "ID", required_unless_present = "all", conflicts_with = "all")]
        statement: Vec<String>,
        /// Every statement, followed by the summary table.
        #[arg(long)]
        all: bool,
        /// Exponents for the counterexample sweep.
        #[arg(long, value_delimiter = ',')]
        p0: Vec<f64>,
    },
    /// Summarize a saved report array.
    Report {
        /// JSON written by `verify --all --json`.
        #[arg(long, value_name = "PATH")]
        input: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OpKind {
    Hardy,
    DualHardy,
    CommutatorHardy,
    CommutatorDualHardy,
    Maximal,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CbmoRule {
    Var,
    Star,
    Inf,
    Constant,
    Classical,
}

/// What a finished command asks the process to do.
enum Outcome {
    Ok,
    ChecksFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
