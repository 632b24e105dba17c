use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "toricprec",
    version,
    about = "Strict linear precision, Horn matrices, toric MLE and moment maps for lattice polytopes"
)]
pub struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Print the full run report as JSON instead of a text table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Numerical tolerance; each command has its own default.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Record wall-clock time in the run report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a named polytope with its standard weights as JSON.
    Catalog(CatalogArgs),
    /// Strict linear precision checks.
    #[command(subcommand)]
    Slp(SlpCommand),
    /// Horn matrices: build, minimize, verify, compare.
    #[command(subcommand)]
    Horn(HornCommand),
    /// Maximum-likelihood estimate for a data vector.
    Mle(MleArgs),
    /// Fubini-Study and quotient moment maps.
    #[command(subcommand)]
    Moment(MomentCommand),
    /// Exhaustive searches.
    #[command(subcommand)]
    Search(SearchCommand),
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    /// p1_segment | simplex K D | square | simploid K:D ... | trapezoid A B DD | graphical
    pub name: String,
    /// Integer parameters, or K:D pairs for simploid.
    pub params: Vec<String>,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum SlpCommand {
    /// Decide strict linear precision for the document's weights.
    Check {
        file: PathBuf,
        /// Override the document's weights, e.g. 1,2,1.
        #[arg(long)]
        weights: Option<String>,
    },
    /// Solve for weights with strict linear precision.
    Weights { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum HornCommand {
    /// Horn matrix of a polytope with strict linear precision.
    Build {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Merge proportional rows.
    Minimize {
        horn: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare the Horn parametrization with the maximum-likelihood estimate.
    Verify {
        horn: PathBuf,
        file: PathBuf,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// Compare Horn rows with lattice distances and primitive collections.
    Explain { horn: PathBuf, file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MleMethodArg {
    /// Closed form when the weights have strict linear precision, else Newton.
    Auto,
    ClosedForm,
    Newton,
}

#[derive(Debug, Args)]
pub struct MleArgs {
    pub file: PathBuf,
    /// Data vector, e.g. 3,1,4,1.
    #[arg(long, allow_hyphen_values = true)]
    pub u: String,
    #[arg(long, value_enum, default_value_t = MleMethodArg::Auto)]
    pub method: MleMethodArg,
}

#[derive(Debug, Subcommand)]
pub enum MomentCommand {
    /// Largest gap between the two moment maps over sampled torus moduli.
    Compare {
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Also write the samples as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Weighted Fubini-Study moment map at q.
    Fs {
        file: PathBuf,
        #[arg(long)]
        q: String,
    },
    /// Quotient moment map at q.
    Quot {
        file: PathBuf,
        #[arg(long)]
        q: String,
    },
    /// Squared moduli 2 h_i(p) over an interior point.
    Lift {
        file: PathBuf,
        #[arg(long)]
        p: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum SearchCommand {
    /// Lattice polygons in [0, N]^2 with strict linear precision.
    Polygons {
        #[arg(long)]
        max_coord: i64,
    },
}
