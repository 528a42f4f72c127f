//! `polarfix`: solve, verify, iterate, reproduce examples and check conjugates.

mod commands;
mod docs;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_NO_SOLVER: u8 = 2;
pub const EXIT_INPUT: u8 = 3;
pub const EXIT_UNKNOWN: u8 = 4;

/// An error that carries its exit code, and optionally a report to print.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    pub report: Option<Value>,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into(), report: None }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

#[derive(Parser)]
#[command(name = "polarfix", version, about = "Convex sets equal to the polar of their linear image")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Number of sampled directions.
    #[arg(long, global = true, default_value_t = 512)]
    pub dirs: usize,
    /// Seed for sampled directions.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Grid nodes per axis for conjugate checks.
    #[arg(long, global = true, default_value_t = 257)]
    pub grid: usize,
    /// Maximum number of iteration steps.
    #[arg(long, global = true, default_value_t = 50)]
    pub steps: usize,
    /// Write a figure of the 2D sets involved.
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn validate(&self) -> Result<(), Failure> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Failure::input("--tol must be positive"));
        }
        if self.dirs == 0 || self.steps == 0 {
            return Err(Failure::input("--dirs and --steps must be positive"));
        }
        if self.grid < 9 {
            return Err(Failure::input("--grid needs at least 9 nodes"));
        }
        Ok(())
    }

    pub fn verify(&self) -> polarfix::verify::VerifyConfig {
        polarfix::verify::VerifyConfig { tol: self.tol, dirs: self.dirs, seed: self.seed, ..Default::default() }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Auto,
    Pd,
    Symmetric,
    #[value(name = "1d")]
    OneD,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a solution for an operator document.
    Solve {
        /// Operator document (stdin when omitted).
        operator: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
    },
    /// Check whether a set solves the equation for an operator.
    Verify {
        /// Set document, or a combined {"set", "operator"} document (stdin when omitted).
        set: Option<PathBuf>,
        /// Operator document.
        #[arg(requires = "set")]
        operator: Option<PathBuf>,
    },
    /// Iterate the polarity map from a starting set; writes a CSV trace.
    Iterate {
        set: Option<PathBuf>,
        #[arg(requires = "set")]
        operator: Option<PathBuf>,
        /// Also write a JSON summary here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Reproduce a worked example.
    Gallery {
        /// Entry name.
        name: Option<String>,
        /// Parameters as key=value.
        params: Vec<String>,
        /// List entry names.
        #[arg(long)]
        list: bool,
    },
    /// Grid conjugate checks for a function family: quadratic, gauge2, f_b.
    Conjugate {
        family: String,
        /// Symmetric positive-definite matrix as JSON (quadratic).
        #[arg(long)]
        matrix: Option<String>,
        /// Set document (gauge2).
        #[arg(long)]
        set: Option<PathBuf>,
        /// Operator document (gauge2); checks f(x) = f*(Gᵀx).
        #[arg(long)]
        operator: Option<PathBuf>,
        /// Parameter of f_b.
        #[arg(long, default_value_t = 2.0)]
        b: f64,
        /// Half-width of the primal grid box.
        #[arg(long, default_value_t = 4.0)]
        half_width: f64,
        /// Write f and f* samples here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(f) = err.downcast_ref::<Failure>() {
        return f.code;
    }
    match err.downcast_ref::<polarfix::Error>() {
        Some(polarfix::Error::UnknownEntry(_)) => EXIT_UNKNOWN,
        _ => EXIT_INPUT,
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    cli.run.validate()?;
    let cfg = &cli.run;
    match cli.command {
        Command::Solve { operator, mode } => commands::solve(cfg, operator.as_deref(), mode),
        Command::Verify { set, operator } => commands::verify(cfg, set.as_deref(), operator.as_deref()),
        Command::Iterate { set, operator, report } => {
            commands::iterate(cfg, set.as_deref(), operator.as_deref(), report.as_deref())
        }
        Command::Gallery { name, params, list } => commands::gallery(cfg, name.as_deref(), &params, list),
        Command::Conjugate { family, matrix, set, operator, b, half_width, csv } => {
            commands::conjugate(cfg, &commands::ConjugateArgs { family, matrix, set, operator, b, half_width, csv })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = cli.run.out.clone();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            if let Some(Failure { report: Some(r), .. }) = err.downcast_ref::<Failure>() {
                let _ = docs::emit(out.as_deref(), &docs::to_text(r));
            }
            eprintln!("polarfix: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
