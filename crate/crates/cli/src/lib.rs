//! Command-line driver for `ffsum`: argument parsing, run configuration and
//! JSON/CSV output.
//!
//! Exit status is 0 on success, 1 on bad input and 2 when a mathematical
//! verification fails.

pub mod commands;
pub mod output;
pub mod selftest;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use ffsum_core::Kind;

pub use output::{CliError, Output, Table};

/// Largest summatory cutoff accepted on the command line.
pub const MAX_XMAX: usize = 4096;

#[derive(Debug, Clone, Parser)]
#[command(name = "ffsum", version, about = "Divisor statistics of hyperelliptic curves over finite fields")]
pub struct Cli {
    /// Worker threads (default: available cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write the command's CSV table here.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Point counts, L-polynomial, class number and inverse zeros.
    Zeta(CurveArgs),
    /// Exact summatory tables, optionally checked against the Euler-product oracle.
    Summatory(SummatoryArgs),
    /// Main term, oscillatory model, residual check and bounds.
    Explicit(ExplicitArgs),
    /// Limiting-distribution densities, Fourier transform and empirical comparisons.
    Distribution(DistributionArgs),
    /// Haar statistics of phi on USp(2g).
    Haar(HaarArgs),
    /// Sweep over all curves y^2 = f(x) of a given genus over F_q.
    Family(FamilyArgs),
    /// Run the built-in acceptance checks.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    /// Curve as `q=<p>[^<n>];f=<c0,c1,...>`.
    #[arg(long)]
    pub curve: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Kfree,
    Totient,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct KindArgs {
    #[arg(long, value_enum, default_value_t = KindArg::Kfree)]
    pub kind: KindArg,
    /// k for k-free counts.
    #[arg(long, default_value_t = 2)]
    pub k: u32,
}

impl KindArgs {
    pub fn kind(&self) -> Kind {
        match self.kind {
            KindArg::Kfree => Kind::Kfree(self.k),
            KindArg::Totient => Kind::Totient,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SummatoryArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    #[command(flatten)]
    pub kind: KindArgs,
    #[arg(long, default_value_t = 12)]
    pub xmax: usize,
    /// Also compute the Euler-product oracle and compare.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ExplicitArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    #[command(flatten)]
    pub kind: KindArgs,
    #[arg(long, default_value_t = 40)]
    pub xmax: usize,
    /// First X of the residual check.
    #[arg(long, default_value_t = 2)]
    pub from: usize,
    /// Model evaluations for the empirical sup.
    #[arg(long, default_value_t = 100_000)]
    pub sup_n: u64,
}

#[derive(Debug, Clone, Args)]
pub struct DistributionArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    #[command(flatten)]
    pub kind: KindArgs,
    #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.5, 1.0, 2.0])]
    pub betas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
    pub ys: Vec<f64>,
    /// Torus draws.
    #[arg(long, default_value_t = 1_000_000)]
    pub mc_samples: u64,
    /// Model evaluations X = 1..=N.
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct HaarArgs {
    #[arg(long)]
    pub g: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 1.2, 1.5, 2.0])]
    pub betas: Vec<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// Field size, `p^n` or the prime power.
    #[arg(long)]
    pub q: String,
    #[arg(long)]
    pub g: usize,
    #[command(flatten)]
    pub kind: KindArgs,
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 1.2, 1.5, 2.0])]
    pub betas: Vec<f64>,
    /// Haar samples for the reference column (0 to skip).
    #[arg(long, default_value_t = 0)]
    pub haar_samples: u64,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Run only these criteria.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u32>,
    /// Corrupt an L coefficient before the functional-equation check.
    #[arg(long)]
    pub inject_fault: bool,
}

/// Validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub threads: usize,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

fn require_seed(seed: Option<u64>, command: &str) -> Result<u64, CliError> {
    seed.ok_or_else(|| CliError::Usage(format!("`{command}` is stochastic and needs --seed")))
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let threads = match cli.threads {
            Some(0) => return Err(CliError::Usage("--threads must be at least 1".into())),
            Some(t) => t,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        match &cli.command {
            Command::Summatory(a) if a.xmax > MAX_XMAX => {
                return Err(CliError::Usage(format!("--xmax {} exceeds {MAX_XMAX}", a.xmax)))
            }
            Command::Explicit(a) if a.xmax > MAX_XMAX => {
                return Err(CliError::Usage(format!("--xmax {} exceeds {MAX_XMAX}", a.xmax)))
            }
            Command::Distribution(a) => {
                require_seed(a.seed, "distribution")?;
            }
            Command::Haar(a) => {
                require_seed(a.seed, "haar")?;
            }
            Command::Family(a) if a.haar_samples > 0 => {
                require_seed(a.seed, "family --haar-samples")?;
            }
            Command::Selftest(a) => {
                require_seed(a.seed, "selftest")?;
            }
            _ => {}
        }
        Ok(Self { command: cli.command, threads, out: cli.out, csv: cli.csv })
    }

    /// The seed of a stochastic command.
    pub fn seed(&self) -> Option<u64> {
        match &self.command {
            Command::Distribution(a) => a.seed,
            Command::Haar(a) => a.seed,
            Command::Family(a) => a.seed,
            Command::Selftest(a) => a.seed,
            _ => None,
        }
    }
}

/// Executes a validated configuration inside a pool of `threads` workers.
pub fn execute(config: &RunConfig) -> Result<Output, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    pool.install(|| commands::dispatch(config))
}

/// Parses `args`, runs the command and writes its output. Returns the exit
/// status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => {
                    output::print_error(&CliError::Usage(e.kind().to_string()));
                    1
                }
            };
        }
    };
    let result = RunConfig::from_cli(cli).and_then(|config| {
        let out = execute(&config)?;
        out.write(config.out.as_deref(), config.csv.as_deref())?;
        Ok(out.status)
    });
    match result {
        Ok(status) => status,
        Err(e) => {
            output::print_error(&e);
            e.exit_code()
        }
    }
}
