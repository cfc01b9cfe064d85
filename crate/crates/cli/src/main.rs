//! `tcone`: JSON front end to the Toeplitz and trigonometric cone routines.
//!
//! Exit status: 0 definite positive outcome, 1 definite negative outcome with
//! a certificate, 2 undecided, 64 usage error, 65 malformed input.

mod commands;
mod input;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

#[derive(Parser)]
#[command(name = "tcone", version, about = "Toeplitz and trigonometric polynomial cone computations")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Common {
    /// Numerical tolerance
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Grid size for scans and LP generators (per-command default when omitted)
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Smallest eigenvalue of a Hermitian matrix
    Psd {
        #[arg(long)]
        input: PathBuf,
    },
    /// Carathéodory decomposition of a PSD Toeplitz matrix
    Carath {
        #[arg(long)]
        input: PathBuf,
    },
    /// Spectral factor of a nonnegative trigonometric polynomial
    FrFactor {
        #[arg(long)]
        input: PathBuf,
    },
    /// Nonnegativity of a trigonometric polynomial on the circle
    FrNonneg {
        #[arg(long)]
        input: PathBuf,
    },
    /// Separable decomposition of a PSD block Toeplitz matrix
    Gurvits {
        #[arg(long)]
        input: PathBuf,
    },
    /// Separable decomposition of [[a, c*], [c, a]]; `--input` holds {a, c}
    Sep2 {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        a: Option<PathBuf>,
        #[arg(long)]
        c: Option<PathBuf>,
    },
    /// Separable decomposition with generalized circulant blocks
    CircSep {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
    },
    /// Positive block Toeplitz extension of [[x0, x1*], [x1, x0]]; `--input` holds {x0, x1}
    Extend {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        x0: Option<PathBuf>,
        #[arg(long)]
        x1: Option<PathBuf>,
        #[arg(long)]
        n: usize,
    },
    /// Complete positivity of a map out of the trigonometric polynomials
    CpCheck {
        #[arg(long)]
        map: PathBuf,
    },
    /// Positivity of a map out of the Toeplitz matrices
    PosCheck {
        #[arg(long)]
        map: PathBuf,
    },
    /// Pairing of a Toeplitz matrix with a trigonometric polynomial; `--input` holds {toeplitz, poly}
    Pair {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        toeplitz: Option<PathBuf>,
        #[arg(long)]
        poly: Option<PathBuf>,
    },
    /// Dual separable cone test for Toeplitz⊗Toeplitz elements
    Sepstar {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        first: Option<PathBuf>,
        #[arg(long)]
        second: Option<PathBuf>,
    },
    /// Dual separable cone test for bivariate trigonometric polynomials
    SepstarFr {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        first: Option<PathBuf>,
        #[arg(long)]
        second: Option<PathBuf>,
    },
    /// Separable decomposition or entanglement certificate for Toeplitz⊗trig elements
    Witness {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 24)]
        root_grid: usize,
    },
    /// Prime-root separable decomposition of R_n
    RnDecompose {
        #[arg(long)]
        n: usize,
    },
    /// Leading principal block of a Toeplitz matrix
    Truncate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Positive Toeplitz extension to a larger size
    ExtendToeplitz {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        m: usize,
    },
    /// Whether [[1, ζ̄], [ζ, 1]] is the corner of a positive m×m circulant
    CornerTest {
        /// ζ as a JSON pair `[re, im]`
        #[arg(long, allow_hyphen_values = true)]
        zeta: String,
        #[arg(long)]
        m: usize,
    },
    /// Membership in the convex hull of the trigonometric moment curve
    ConvHull {
        #[arg(long)]
        input: PathBuf,
    },
}

/// Why no report was produced.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Format(String),
}

/// Decision carried by a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Positive,
    Negative,
    Unknown,
}

impl Verdict {
    fn code(self) -> u8 {
        match self {
            Verdict::Positive => 0,
            Verdict::Negative => 1,
            Verdict::Unknown => 2,
        }
    }
}

#[derive(Serialize)]
struct Report {
    command: String,
    inputs_hash: String,
    outcome: Value,
    tolerances: Tolerances,
    seed: u64,
    version: &'static str,
}

#[derive(Serialize)]
struct Tolerances {
    tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(64)
        }
        Err(Failure::Format(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(65)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let common = cli.common;
    if !(common.tol.is_finite() && common.tol >= 0.0) {
        return Err(Failure::Usage("--tol must be a nonnegative number".into()));
    }
    let (name, inputs, verdict, outcome) = commands::execute(&cli.command, &common)?;
    let report = Report {
        command: name.to_string(),
        inputs_hash: inputs.finish(),
        outcome,
        tolerances: Tolerances { tol: common.tol, grid: common.grid },
        seed: common.seed,
        version: env!("CARGO_PKG_VERSION"),
    };
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    match &common.output {
        Some(path) => fs::write(path, text + "\n")
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(verdict.code())
}
