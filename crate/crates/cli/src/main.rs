//! `amf`: Weyl-group tables, Eichler elements, genus enumeration, Hecke
//! eigenvalues and method benchmarks from the command line.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "amf", version, about = "Hecke operators on algebraic modular forms via Eichler elements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Number of worker threads (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lengths, reduced words and the length-zero group of an affine Weyl group.
    Weyl(WeylArgs),
    /// Eichler elements between maximal parahorics.
    Eichler(EichlerArgs),
    /// Enumerate the principal genus of hermitian lattices.
    Genus(GenusArgs),
    /// Hecke matrices and joint eigenvalues at split primes.
    Hecke(HeckeArgs),
    /// Compare the Eichler method against the direct method.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct TypeArgs {
    /// Cartan series (A-G).
    #[arg(long = "type")]
    pub series: String,
    #[arg(long)]
    pub rank: usize,
}

#[derive(Debug, Args)]
pub struct WeylArgs {
    #[command(flatten)]
    pub ty: TypeArgs,
    /// A word in the simple reflections, e.g. `s0s1s0`.
    #[arg(long)]
    pub element: Option<String>,
    /// Show the length-zero group and its action on the affine diagram.
    #[arg(long)]
    pub omega: bool,
}

#[derive(Debug, Args)]
pub struct EichlerArgs {
    #[command(flatten)]
    pub ty: TypeArgs,
    /// One ordered pair `i,j` of maximal parahorics, 1-based (node `i-1` deleted).
    #[arg(long)]
    pub pair: Option<String>,
    /// Evaluate the coefficients at this integer.
    #[arg(long = "eval-q")]
    pub eval_q: Option<i64>,
    /// Show the translations generating the Eichler algebra instead.
    #[arg(long)]
    pub generators: bool,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    /// Discriminant of the definite quaternion algebra.
    #[arg(long)]
    pub disc: u64,
    /// Rank of the hermitian lattices.
    #[arg(long)]
    pub n: usize,
    /// Directory for cached genus data.
    #[arg(long = "cache-dir")]
    pub cache_dir: Option<PathBuf>,
    /// Maximal number of classes before giving up.
    #[arg(long = "class-bound", default_value_t = 10_000)]
    pub class_bound: usize,
}

#[derive(Debug, Args)]
pub struct GenusArgs {
    #[command(flatten)]
    pub lat: LatticeArgs,
    /// Split prime for the neighbour steps (default: the smallest).
    #[arg(long)]
    pub prime: Option<u64>,
}

#[derive(Debug, Args)]
pub struct HeckeArgs {
    #[command(flatten)]
    pub lat: LatticeArgs,
    /// Comma-separated split primes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub primes: Vec<u64>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub lat: LatticeArgs,
    /// Comma-separated split primes.
    #[arg(long, alias = "primes", value_delimiter = ',', required = true)]
    pub prime: Vec<u64>,
    /// Comma-separated modes: eichler, direct.
    #[arg(long, value_delimiter = ',', default_value = "eichler,direct")]
    pub modes: Vec<String>,
}

/// Failure classes that map to distinct exit codes.
#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Bound(String),
    Other(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Bound(_) => 3,
            Failure::Other(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Validation(m) => write!(f, "invalid input: {m}"),
            Failure::Bound(m) => write!(f, "resource bound exceeded: {m}"),
            Failure::Other(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<amf_core::Error> for Failure {
    fn from(e: amf_core::Error) -> Self {
        use amf_core::Error as E;
        match e {
            E::BoundExceeded { .. } => Failure::Bound(e.to_string()),
            E::InvalidType { .. } | E::UnknownSeries(_) | E::BadWord(_) | E::BadGenerator(_) | E::UnsupportedType(_) => {
                Failure::Validation(e.to_string())
            }
            other => Failure::Other(other.into()),
        }
    }
}

impl From<amf_lattice::Error> for Failure {
    fn from(e: amf_lattice::Error) -> Self {
        use amf_lattice::Error as E;
        match e {
            E::Core(c) => c.into(),
            E::ClassBound(_) => Failure::Bound(e.to_string()),
            E::UnsupportedDiscriminant(_) | E::Ramified { .. } | E::NotPrime(_) => Failure::Validation(e.to_string()),
            other => Failure::Other(other.into()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Other(e.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("invalid input: --workers must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.code())
        }
    }
}
