mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use transcend::{Error, ErrorKind};

#[derive(Parser, Debug)]
#[command(name = "transcend", version, about = "Siegel-method toolkit for E- and M-function values")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Exhaustive,
    Lattice,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RecordsArg {
    All,
    Frontier,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Instance file (JSON).
    pub spec: PathBuf,
    /// Working precision in bits.
    #[arg(long)]
    pub precision: Option<u32>,
    /// Truncation order of the power series.
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyArg>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Power-series coefficients of every function.
    Series {
        #[command(flatten)]
        common: Common,
    },
    /// Companion systems and their direct sum.
    System {
        #[command(flatten)]
        common: Common,
    },
    /// Regularity of the system at the evaluation point.
    Regular {
        #[command(flatten)]
        common: Common,
        /// Exit with status 2 when the point is singular.
        #[arg(long)]
        require: bool,
    },
    /// Auxiliary form of degree n vanishing to order vstar.
    Pade {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        aux: AuxArgs,
    },
    /// Θ or Mahler steps applied to the auxiliary form.
    Iterate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        aux: AuxArgs,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Polynomial relations among the functions and a Gröbner basis of their specialization.
    Relations {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        z_degree: Option<usize>,
        #[arg(long)]
        margin: Option<usize>,
    },
    /// Dimension ledger (p, q, r, s, u, v, w).
    Ledger {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        h: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        z_degree: Option<usize>,
        #[arg(long)]
        margin: Option<usize>,
    },
    /// Valuations of random polynomial combinations.
    Multiplicity {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        trials: Option<usize>,
        /// z-degree bound M.
        #[arg(long = "big-m")]
        big_m: Option<usize>,
        /// Degree bound N in the functions.
        #[arg(long = "big-n")]
        big_n: Option<usize>,
    },
    /// Certified values at the evaluation point.
    Eval {
        #[command(flatten)]
        common: Common,
    },
    /// Lower bounds for |P(ω)| over integer polynomials of bounded degree and height.
    Scan {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        h_max: Option<u64>,
        #[arg(long, value_enum, default_value = "frontier")]
        records: RecordsArg,
    },
    /// Best approximation exponents over a height schedule.
    Wd {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        d: Option<usize>,
        /// Comma-separated heights.
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<u64>>,
    },
    /// Iterated Mahler system regular at the evaluation point.
    Compose {
        #[command(flatten)]
        common: Common,
        /// Target modulus for α^{q^ℓ}, as "p/q".
        #[arg(long)]
        rho: Option<String>,
        #[arg(long)]
        ell: Option<usize>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct AuxArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub vstar: Option<usize>,
    /// ε in the default target order, as "p/q".
    #[arg(long)]
    pub eps: Option<String>,
}

/// Failure of a command: a library error or a refusal decided by the driver.
#[derive(Debug)]
pub enum Failure {
    Lib(Error),
    Usage(String),
    /// Mathematical outcome that the caller required not to happen.
    Math { code: &'static str, message: String },
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(e) => match e.kind() {
                ErrorKind::Usage => 1,
                ErrorKind::Math => 2,
                ErrorKind::Precision => 3,
            },
            Failure::Usage(_) | Failure::Io(_) => 1,
            Failure::Math { .. } => 2,
        }
    }

    fn diagnostic(&self) -> serde_json::Value {
        let (code, message) = match self {
            Failure::Lib(e) => (e.code(), e.to_string()),
            Failure::Usage(m) => ("usage", m.clone()),
            Failure::Math { code, message } => (*code, message.clone()),
            Failure::Io(e) => ("io", e.to_string()),
        };
        serde_json::json!({ "schema": 1, "error": code, "message": message, "exit_code": self.exit_code() })
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("TRANSCEND_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let f = Failure::Usage(e.to_string().trim().to_string());
            eprintln!("{}", f.diagnostic());
            return ExitCode::from(f.exit_code());
        }
    };
    configure_threads();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.diagnostic());
            ExitCode::from(f.exit_code())
        }
    }
}
