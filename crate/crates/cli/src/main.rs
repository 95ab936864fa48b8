//! `compactlin`: linearize binary quadratic programs from the command line.

mod commands;
mod output;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "compactlin", version, about = "Compact linearization of binary quadratic programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Compact,
    Gw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoverArg {
    Exact,
    Greedy,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Lp,
    Mps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckArg {
    Consistency,
    Dominance,
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetArg {
    MostCompact,
    FriezeYadegar,
    Gw,
}

#[derive(Debug, clap::Args)]
pub struct InstanceArgs {
    /// Instance JSON; `-` reads standard input.
    pub instance: PathBuf,
    /// Keep only these side constraints (1-based, comma separated); the
    /// others become pass-through rows.
    #[arg(long, value_delimiter = ',')]
    pub constraints: Option<Vec<usize>>,
}

#[derive(Debug, clap::Args)]
pub struct CoverArgs {
    #[arg(long, value_enum, default_value = "exact")]
    pub cover: CoverArg,
    /// Design JSON, required with `--cover file`.
    #[arg(long)]
    pub design: Option<PathBuf>,
    /// Cover weights `wE,wI+,wI-,wQ`, each an integer or `p/q`.
    #[arg(long)]
    pub weights: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a linearized MILP and write it with its design and a summary.
    Linearize {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long, value_enum, default_value = "compact")]
        method: MethodArg,
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long, value_enum, default_value = "lp")]
        format: FormatArg,
        /// Output stem: writes STEM.lp (or .mps), STEM.design.json, STEM.summary.json.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        force: bool,
    },
    /// Compare the compact and Glover–Woolsey models of an instance.
    Compare {
        #[command(flatten)]
        input: InstanceArgs,
        #[command(flatten)]
        cover: CoverArgs,
        /// Write the comparison JSON here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
    /// Check a design: consistency by enumeration, LP dominance, strict dominance.
    Verify {
        #[command(flatten)]
        input: InstanceArgs,
        /// Design JSON.
        design: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "consistency,dominance,strict")]
        checks: Vec<CheckArg>,
        /// Report stem: writes STEM.verify.json and STEM.verify.txt.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
    /// Generate a quadratic assignment instance.
    GenQap {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "most-compact")]
        preset: PresetArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instance path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the preset design.
        #[arg(long)]
        design_out: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
    /// Generate a symmetric quadratic TSP instance.
    GenQtsp {
        #[arg(long)]
        nodes: usize,
        /// Add subtour elimination rows (at most 10 nodes).
        #[arg(long)]
        subtour: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        design_out: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
    /// Generate a random instance with mixed side constraints.
    GenRandom {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        equations: usize,
        #[arg(long, default_value_t = 1)]
        inequalities: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// All constraint coefficients equal to 1.
        #[arg(long)]
        unit: bool,
        /// Pairwise disjoint constraint supports.
        #[arg(long)]
        disjoint: bool,
        #[arg(long, default_value_t = 4)]
        max_support: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
}

/// Failure with its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable files, refused overwrites and other plumbing errors.
    Io(anyhow::Error),
    /// The instance, design or flags are invalid.
    Invalid(String),
    /// The supplied design misses a condition or a demanded product.
    Design(String),
    /// A requested check failed; reports were written.
    Check,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Design(_) => 3,
            Failure::Check => 4,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.into())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Linearize { input, method, cover, format, out, force } => {
            commands::linearize(&input, method, &cover, format, &out, force)
        }
        Command::Compare { input, cover, out, force } => commands::compare(&input, &cover, out.as_deref(), force),
        Command::Verify { input, design, checks, out, force } => {
            commands::verify(&input, &design, &checks, out.as_deref(), force)
        }
        Command::GenQap { n, preset, seed, out, design_out, force } => {
            commands::gen_qap(n, preset, seed, out.as_deref(), design_out.as_deref(), force)
        }
        Command::GenQtsp { nodes, subtour, seed, out, design_out, force } => {
            commands::gen_qtsp(nodes, subtour, seed, out.as_deref(), design_out.as_deref(), force)
        }
        Command::GenRandom { n, equations, inequalities, density, unit, disjoint, max_support, seed, out, force } => {
            let opts = commands::RandomOpts { n, equations, inequalities, density, unit, disjoint, max_support };
            commands::gen_random(&opts, seed, out.as_deref(), force)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Io(e) => eprintln!("error: {e:#}"),
                Failure::Invalid(msg) => eprintln!("invalid input: {msg}"),
                Failure::Design(msg) => eprintln!("design rejected: {msg}"),
                Failure::Check => eprintln!("verification failed"),
            }
            ExitCode::from(failure.code())
        }
    }
}
