mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Generalized polygons, t-good structures and their classification.
#[derive(Debug, Parser)]
#[command(name = "polyforge", version)]
pub struct Cli {
    /// worker threads
    #[arg(long, global = true, env = "POLYFORGE_JOBS")]
    pub jobs: Option<usize>,
    /// seed for randomized choices
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// where to write the run manifest (default: next to the first output)
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a polygon and write it as JSON.
    Build {
        /// pg2, w3 or hexagon
        #[arg(long)]
        polygon: String,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the axioms of a polygon file.
    VerifyPolygon {
        #[arg(long)]
        host: PathBuf,
    },
    /// Run a named construction.
    Construct(ConstructArgs),
    /// Check a structure file against its host.
    VerifyGood {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        structure: PathBuf,
    },
    /// Evaluate a bound.
    Bound(BoundArgs),
    /// Eigenvalues of the incidence graph.
    Spectrum {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate 1-good (or t-good) structures.
    Search(SearchArgs),
    /// Classify saved solutions under the collineation group.
    Classify {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        solutions: PathBuf,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Print the table of a classification file.
    Report {
        #[arg(long)]
        classification: PathBuf,
        /// use the classes merged with their duals
        #[arg(long)]
        up_to_duality: bool,
    },
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub host: PathBuf,
    /// planar, lift or hexagon
    #[arg(long)]
    pub construction: String,
    /// planar structure: point-on-line, point-off-line or baer
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub point: Option<usize>,
    #[arg(long)]
    pub line: Option<usize>,
    #[arg(long)]
    pub anchor: Option<usize>,
    /// two linear forms as field element indices, e.g. "1,0,0,0,0,0,0;0,1,0,0,0,0,0"
    #[arg(long)]
    pub equations: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
#[group(id = "mode", required = true, multiple = false)]
pub struct BoundMode {
    /// largest t-good structure in a generalized n-gon of order q (needs --n, --q, --t)
    #[arg(long)]
    pub tgood: bool,
    /// vertex ratio window of a k-regular induced subgraph of a d-regular graph (needs --d, --k, --lambda)
    #[arg(long)]
    pub ratio: bool,
    /// cage bound from polygon substructures (needs --q, --g)
    #[arg(long)]
    pub cage: bool,
    /// Moore bound (needs --k, --g)
    #[arg(long)]
    pub moore: bool,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub mode: BoundMode,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub t: Option<u64>,
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub g: Option<u32>,
    /// a size to compare against the bound
    #[arg(long)]
    pub compare: Option<u64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub host: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub t: u32,
    /// group file; only structures fixed by this group are searched
    #[arg(long, conflicts_with = "stabilizer_of")]
    pub group: Option<PathBuf>,
    /// search structures fixed by the stabilizer of this structure file
    #[arg(long)]
    pub stabilizer_of: Option<PathBuf>,
    /// save and resume the branch queue here
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// branches per checkpoint save
    #[arg(long, default_value_t = 64)]
    pub batch: usize,
    #[arg(long)]
    pub classify: bool,
    #[arg(long)]
    pub no_symmetry_breaking: bool,
    #[arg(long)]
    pub include_full: bool,
    #[arg(long)]
    pub min_size: Option<usize>,
    #[arg(long)]
    pub max_size: Option<usize>,
    #[arg(long)]
    pub node_limit: Option<u64>,
    #[arg(long, default_value_t = 8)]
    pub split_depth: usize,
    #[command(flatten)]
    pub class: ClassArgs,
}

#[derive(Debug, Args)]
pub struct ClassArgs {
    /// also pair classes swapped by a duality (W(3,q), q even)
    #[arg(long)]
    pub duality: bool,
    /// directory for solutions, per-class files and the table
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

/// A check ran and did not pass.
#[derive(Debug)]
pub struct VerificationFailed(pub String);

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for VerificationFailed {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<VerificationFailed>() => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
