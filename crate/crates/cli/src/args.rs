//! Command-line surface. `run` also accepts a JSON config file whose
//! keys mirror the flags; explicit flags win on conflict.

use std::path::PathBuf;

use bacteria_farm::GrowthMode;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(
    name = "cluster",
    version,
    about = "Cluster datasets with bacteria-farm, k-means, or DBSCAN",
    after_help = "Exit codes: 0 success, 1 algorithm failure, 2 configuration error."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one algorithm on one dataset and write labels/metrics/plot.
    Run(RunArgs),
    /// Run every (dataset, algorithm) cell of a suite and write a CSV
    /// report with per-algorithm average rows.
    Bench(BenchArgs),
    /// Fit the same dataset with several front-runner counts and write
    /// the pairwise label-agreement matrix.
    #[command(name = "sweep-nfr")]
    SweepNfr(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    BacteriaFarm,
    Kmeans,
    Dbscan,
}

impl std::fmt::Display for Algo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algo::BacteriaFarm => write!(f, "bacteria-farm"),
            Algo::Kmeans => write!(f, "kmeans"),
            Algo::Dbscan => write!(f, "dbscan"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Sequential,
    RoundRobin,
}

impl From<Mode> for GrowthMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Sequential => GrowthMode::Sequential,
            Mode::RoundRobin => GrowthMode::RoundRobin,
        }
    }
}

/// `run` flags. Every field is optional here; defaults are applied
/// after the config file (if any) is merged underneath the flags.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunArgs {
    /// CSV dataset to load (numeric columns, header auto-detected).
    #[arg(long, conflicts_with = "gen")]
    pub input: Option<PathBuf>,

    /// Generator spec, e.g. blobs:n=300,k=3,spread=0.5 or
    /// moons:n=400,jitter=0.05 (optional keys: dim, seed).
    #[arg(long)]
    pub gen: Option<String>,

    /// Algorithm to run [default: bacteria-farm].
    #[arg(long, value_enum)]
    pub algo: Option<Algo>,

    /// Bacteria-farm noise fraction in [0, 1) [default: 0.1].
    #[arg(long)]
    pub noise: Option<f64>,

    /// Bacteria-farm front-runner count [default: 5].
    #[arg(long)]
    pub nfr: Option<usize>,

    /// Bacteria-farm phase-1 sample fraction in (0, 1] [default: 0.2].
    #[arg(long)]
    pub sample: Option<f64>,

    /// Phase-1 spec: kmeans:k=3 or dbscan:eps=0.3,min_pts=5
    /// [default: kmeans with the generator's cluster count, else k=3].
    #[arg(long)]
    pub phase1: Option<String>,

    /// Growth order [default: sequential].
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,

    /// Cluster count for --algo kmeans [default: generator's k].
    #[arg(long)]
    pub k: Option<usize>,

    /// Neighborhood radius for --algo dbscan; omit to grid-tune.
    #[arg(long)]
    pub eps: Option<f64>,

    /// Core-point threshold for --algo dbscan [default: 5].
    #[arg(long = "min-pts")]
    pub min_pts: Option<usize>,

    /// RNG seed for sampling, k-means init, and generators
    /// [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,

    /// Z-score standardize columns before clustering.
    #[arg(long)]
    pub standardize: bool,

    /// Report wall_time_ms as 0 so output files are byte-reproducible.
    #[arg(long = "no-timing")]
    pub no_timing: bool,

    /// Where to write the labels CSV (header: index,label).
    #[arg(long = "out-labels")]
    pub out_labels: Option<PathBuf>,

    /// Where to write the metrics JSON.
    #[arg(long = "out-metrics")]
    pub out_metrics: Option<PathBuf>,

    /// Where to write an SVG scatter plot (2-d datasets only).
    #[arg(long = "out-plot")]
    pub out_plot: Option<PathBuf>,

    /// JSON config file with the same keys as these flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl RunArgs {
    /// Overlays `self` (flags) on `base` (config file): any flag that
    /// was given wins, booleans are or-ed.
    pub fn merged_over(self, base: RunArgs) -> RunArgs {
        RunArgs {
            input: self.input.or(base.input),
            gen: self.gen.or(base.gen),
            algo: self.algo.or(base.algo),
            noise: self.noise.or(base.noise),
            nfr: self.nfr.or(base.nfr),
            sample: self.sample.or(base.sample),
            phase1: self.phase1.or(base.phase1),
            mode: self.mode.or(base.mode),
            k: self.k.or(base.k),
            eps: self.eps.or(base.eps),
            min_pts: self.min_pts.or(base.min_pts),
            seed: self.seed.or(base.seed),
            standardize: self.standardize || base.standardize,
            no_timing: self.no_timing || base.no_timing,
            out_labels: self.out_labels.or(base.out_labels),
            out_metrics: self.out_metrics.or(base.out_metrics),
            out_plot: self.out_plot.or(base.out_plot),
            config: self.config,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Suite JSON: {"datasets": [...], "algorithms": [...], "seed": N}.
    #[arg(long)]
    pub suite: PathBuf,

    /// Where to write the report CSV.
    #[arg(long)]
    pub out: PathBuf,

    /// Report wall_time_ms as 0 so the report is byte-reproducible.
    #[arg(long = "no-timing")]
    pub no_timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// CSV dataset to load.
    #[arg(long, conflicts_with = "gen")]
    pub input: Option<PathBuf>,

    /// Generator spec (same grammar as `run --gen`).
    #[arg(long)]
    pub gen: Option<String>,

    /// Front-runner counts to sweep, e.g. --values 3,5,7.
    #[arg(long, value_delimiter = ',', required = true)]
    pub values: Vec<usize>,

    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,

    /// Bacteria-farm noise fraction [default: 0.1].
    #[arg(long)]
    pub noise: Option<f64>,

    /// Phase-1 sample fraction [default: 0.2].
    #[arg(long)]
    pub sample: Option<f64>,

    /// Phase-1 spec [default: kmeans with the generator's k, else 3].
    #[arg(long)]
    pub phase1: Option<String>,

    /// Growth order [default: sequential].
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,

    /// RNG seed [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,

    /// Z-score standardize columns before clustering.
    #[arg(long)]
    pub standardize: bool,

    /// Report wall_time_ms as 0 so output files are byte-reproducible.
    #[arg(long = "no-timing")]
    pub no_timing: bool,
}
