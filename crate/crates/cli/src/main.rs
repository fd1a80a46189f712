//! `fermatph`: Fermat distances, Rips persistence and change-point detection
//! from the command line.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "fermatph", version, about = "Fermat distances, Vietoris-Rips persistence and topological change points")]
struct Cli {
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, global = true, env = "FERMATPH_THREADS", default_value_t = 0)]
    threads: usize,

    /// JSON parameter file; flags given on the command line take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a synthetic point cloud or signal.
    Generate(GenerateArgs),
    /// Compute a distance matrix from a point cloud.
    Distmat(DistmatArgs),
    /// Compute the Rips persistence diagram of a distance matrix.
    Ph(PhArgs),
    /// Bottleneck distance between two diagrams, with an optimal matching.
    Bottleneck(BottleneckArgs),
    /// Largest entrywise difference between two distance matrices.
    Distortion(DistortionArgs),
    /// Classical multidimensional scaling of a distance matrix.
    Mds(MdsArgs),
    /// Delay embedding of a signal.
    Embed(EmbedArgs),
    /// Change-point score of a signal and its peaks.
    Changepoints(ChangepointsArgs),
    /// Run a reproducible experiment and write its JSON report.
    Experiment(ExperimentArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::Distmat(_) => "distmat",
            Command::Ph(_) => "ph",
            Command::Bottleneck(_) => "bottleneck",
            Command::Distortion(_) => "distortion",
            Command::Mds(_) => "mds",
            Command::Embed(_) => "embed",
            Command::Changepoints(_) => "changepoints",
            Command::Experiment(_) => "experiment",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    Eyeglasses,
    Trefoil,
    Circle,
    Sphere,
    FlatTorus,
    /// Noisy x-coordinate of the Lorenz system.
    Lorenz,
    /// Sine that doubles its frequency half way.
    SineSwitch,
    /// Outliers around the cloud given by `--input`.
    Outliers,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    /// Number of points or samples.
    #[arg(long, default_value_t = 250)]
    pub n: usize,
    /// Standard deviation of additive Gaussian noise.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Length of the Lorenz trajectory in time units.
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    pub t_max: f64,
    /// Sampling step of generated signals.
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    pub dt: f64,
    /// Initial period of the sine, in samples.
    #[arg(long, default_value_t = 40.0, allow_negative_numbers = true)]
    pub period: f64,
    /// Sample at which the sine switches frequency; defaults to `n / 2`.
    #[arg(long)]
    pub switch_at: Option<usize>,
    /// Cloud that outliers are placed around.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Number of outliers.
    #[arg(long, default_value_t = 10)]
    pub m: usize,
    /// Minimum distance of outliers from everything else; defaults to twice
    /// the longest minimum-spanning-tree edge of the input.
    #[arg(long, allow_negative_numbers = true)]
    pub min_gap: Option<f64>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricArg {
    Euclidean,
    Fermat,
    Knn,
    Quotient,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct DistmatArgs {
    /// Point cloud CSV.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = MetricArg::Fermat)]
    pub metric: MetricArg,
    /// Fermat exponent.
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub p: f64,
    /// Neighbour count: required for `knn`, restricts Fermat paths to the
    /// k-NN graph when given with `fermat`.
    #[arg(long)]
    pub k: Option<usize>,
    /// Intrinsic dimension; with `--mu`, rescales Fermat distances.
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Outlier cloud for the quotient metric.
    #[arg(long)]
    pub outliers: Option<PathBuf>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Cohomology with implicit coboundaries.
    Implicit,
    /// Explicit filtration and boundary matrix reduction.
    Explicit,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct PhArgs {
    /// Distance matrix CSV.
    pub input: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub max_dim: usize,
    /// Keep simplices with diameter strictly below `r`; unbounded if omitted.
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<f64>,
    #[arg(long, value_enum, default_value_t = Algorithm::Implicit)]
    pub algorithm: Algorithm,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct BottleneckArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub degree: usize,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct DistortionArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct MdsArgs {
    /// Distance matrix CSV.
    pub input: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct EmbedArgs {
    /// Signal CSV.
    pub input: PathBuf,
    /// Delay in samples.
    #[arg(long, default_value_t = 15)]
    pub tau: usize,
    /// Embedding dimension.
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    /// Sampling step when the file does not record one; defaults to 1.
    #[arg(long, allow_negative_numbers = true)]
    pub dt: Option<f64>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrefixMetricArg {
    /// Restrict the Fermat distance of the whole embedded cloud.
    Inherited,
    /// Recompute the Fermat distance on each prefix.
    Recomputed,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ChangepointsArgs {
    /// Signal CSV.
    pub input: PathBuf,
    #[arg(long, default_value_t = 15)]
    pub tau: usize,
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    /// Samples between consecutive embedded points; raise it for long signals.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub p: f64,
    /// Prefix growth in embedded points.
    #[arg(long, default_value_t = 20)]
    pub step: usize,
    /// Homology degree compared between prefixes.
    #[arg(long, default_value_t = 1)]
    pub degree: usize,
    /// Moving-average window of the score, in prefixes.
    #[arg(long, default_value_t = 3)]
    pub window: usize,
    /// Peak threshold in standard deviations above the mean.
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    pub z: f64,
    #[arg(long, value_enum, default_value_t = PrefixMetricArg::Inherited)]
    pub metric: PrefixMetricArg,
    /// Sampling step when the file does not record one; defaults to 1.
    #[arg(long, allow_negative_numbers = true)]
    pub dt: Option<f64>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentName {
    Eyeglasses,
    TrefoilOutliers,
    Lorenz,
    Convergence,
    Changepoint,
    Stability,
}

impl ExperimentName {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentName::Eyeglasses => "eyeglasses",
            ExperimentName::TrefoilOutliers => "trefoil-outliers",
            ExperimentName::Lorenz => "lorenz",
            ExperimentName::Convergence => "convergence",
            ExperimentName::Changepoint => "changepoint",
            ExperimentName::Stability => "stability",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ExperimentArgs {
    #[arg(value_enum)]
    pub name: ExperimentName,
    /// Overrides the seed, or the seed list, of the experiment.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory receiving `<name>.json`.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

fn run(cli: Cli, matches: &clap::ArgMatches) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .context("starting the thread pool")?;
    let name = cli.command.name();
    let sub = matches.subcommand_matches(name).context("missing subcommand")?;
    let section = match &cli.config {
        Some(path) => {
            let key = match &cli.command {
                Command::Experiment(a) => a.name.as_str(),
                _ => name,
            };
            Some(config::load_section(path, key)?)
        }
        None => None,
    };
    let section = section.as_ref();
    match &cli.command {
        Command::Generate(a) => commands::generate(&config::resolve(a, sub, section)?),
        Command::Distmat(a) => commands::distmat(&config::resolve(a, sub, section)?),
        Command::Ph(a) => commands::ph(&config::resolve(a, sub, section)?),
        Command::Bottleneck(a) => commands::bottleneck(&config::resolve(a, sub, section)?),
        Command::Distortion(a) => commands::distortion(&config::resolve(a, sub, section)?),
        Command::Mds(a) => commands::mds(&config::resolve(a, sub, section)?),
        Command::Embed(a) => commands::embed(&config::resolve(a, sub, section)?),
        Command::Changepoints(a) => commands::changepoints(&config::resolve(a, sub, section)?),
        Command::Experiment(a) => commands::experiment(a, section),
    }
}

fn main() -> ExitCode {
    let matches = Cli::command().get_matches();
    let cli = Cli::from_arg_matches(&matches).unwrap_or_else(|e| e.exit());
    match run(cli, &matches) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", commands::error_json(&err));
            ExitCode::FAILURE
        }
    }
}
