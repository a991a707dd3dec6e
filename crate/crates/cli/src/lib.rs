//! `quolab`: profile sets, convergence diagnostics and verification suites
//! from the command line.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod family;
pub mod inputs;
pub mod report;
pub mod suites;

use config::{Format, StrategyName};
pub use family::{example51, FamilyName, GraphSeqName};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] quolab_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_cap() => 3,
            _ => 2,
        }
    }

    /// Which `[limits]` field to raise for a cap error.
    fn cap_hint(&self) -> Option<&'static str> {
        use quolab_core::Error as E;
        let CliError::Core(e) = self else { return None };
        Some(match e {
            E::GroundTooLarge { .. } => "max_ground",
            E::KTooLarge { .. } => "max_k",
            E::EnumCap { .. } => "max_iterations",
            E::FlatExplosion { .. } => "max_flats",
            E::CapExceeded { what, .. } => match *what {
                "node count for exact cut distance" | "blow-up size for cut distance" => "max_cut_nodes",
                "pattern node count" => "max_pattern_nodes",
                "target node count" => "max_target_nodes",
                "graphon step count" => "max_steps",
                "color count" => "max_colors",
                _ => return None,
            },
            _ => return None,
        })
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "quolab", version, about = "Quotient profiles of submodular setfunctions and graph-limit diagnostics")]
pub struct Cli {
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// TOML file with defaults for any flag; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Include wall-clock timings (breaks byte-identical reruns).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ProfileArgs {
    #[arg(long)]
    pub k: Option<usize>,
    /// Q, T, T-delta or T-nabla.
    #[arg(long)]
    pub mode: Option<quolab_core::profiles::ProfileMode>,
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyName>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random tuples for the sampled strategy.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    /// Field size for gf-space.
    #[arg(long)]
    pub q: Option<u32>,
    /// Base graph: a file or a name such as K4, C5, P3, E2, K3,2.
    #[arg(long)]
    pub graph: Option<String>,
    /// Pattern graph F for tau.
    #[arg(long)]
    pub pattern: Option<String>,
    /// Graph sequence underlying tau and cutcap.
    #[arg(long, value_enum)]
    pub graphs: Option<GraphSeqName>,
    /// GF(q) matrix file for the linear family.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// edges, twice-edges or nodes-squared.
    #[arg(long)]
    pub norm: Option<quolab_core::graphlim::CutNormalization>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Profile set of one member of a family.
    Profile {
        #[command(flatten)]
        family: FamilyArgs,
        /// Index of the member.
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        profile: ProfileArgs,
    },
    /// Pairwise Hausdorff distances and a Cauchy verdict along a family.
    Converge {
        #[command(flatten)]
        family: FamilyArgs,
        /// Inclusive index range, e.g. 5..10.
        #[arg(long)]
        range: family::IndexRange,
        #[command(flatten)]
        profile: ProfileArgs,
    },
    /// Run a named verification suite, or `all`.
    Verify {
        suite: String,
        /// Seed for the randomized suites.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Labeled cut distance and a blow-up upper bound for the unlabeled one.
    Cutdist {
        a: String,
        b: String,
        #[arg(long)]
        t_max: Option<usize>,
        /// Random restarts of the bijection search.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Homomorphism density of F in a graph and/or a step graphon.
    Hom {
        f: String,
        g: Option<String>,
        #[arg(long)]
        graphon: Option<PathBuf>,
    },
    /// Cut-capacity profiles of graphs or a step graphon.
    Cutcap {
        graphs: Vec<String>,
        #[arg(long)]
        graphon: Option<PathBuf>,
        #[arg(long)]
        norm: Option<quolab_core::graphlim::CutNormalization>,
        #[command(flatten)]
        profile: ProfileArgs,
    },
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::execute(cli) {
        Ok(outcome) => {
            if outcome.failed {
                1
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(field) = e.cap_hint() {
                eprintln!(
                    "hint: raise `{field}` under [limits] in a --config file, or use --strategy sampled --seed N"
                );
            }
            e.exit_code()
        }
    }
}
