//! Subcommand implementations and the exit-code contract:
//! 0 success, 1 algorithm failure, 2 configuration error (bad flags,
//! unparsable specs or suite, unloadable input).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use bacteria_farm::{
    label_agreement, parse_csv, BfConfig, Dataset64, Error, GrowthMode, KMeansParams,
};
use serde::Deserialize;

use crate::args::{Algo, BenchArgs, Cli, Command, Mode, RunArgs, SweepArgs};
use crate::genspec::{parse_phase1, GenSpec};
use crate::outputs::{write_labels_csv, write_metrics_json, write_scatter_svg};
use crate::runner::{execute, AlgoSpec, RunOutcome};

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

pub fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Bench(args) => cmd_bench(args),
        Command::SweepNfr(args) => cmd_sweep(args),
    }
}

/// Default parameter values shared by `run` and `sweep-nfr`.
const DEFAULT_NOISE: f64 = 0.1;
const DEFAULT_NFR: usize = 5;
const DEFAULT_SAMPLE: f64 = 0.2;
const DEFAULT_MIN_PTS: usize = 5;
const FALLBACK_K: usize = 3;

struct Source {
    ds: Dataset64,
    /// Natural cluster count when the dataset came from a generator.
    default_k: Option<usize>,
}

/// Loads a CSV, treating the first row as a header only when it does
/// not parse as numbers.
fn load_csv_auto(path: &Path) -> bacteria_farm::Result<Dataset64> {
    let text = fs::read_to_string(path)?;
    match parse_csv(&text, false) {
        Ok(ds) => Ok(ds),
        Err(Error::CsvParse { row: 1, .. }) => parse_csv(&text, true),
        Err(e) => Err(e),
    }
}

fn load_source(
    input: &Option<PathBuf>,
    gen: &Option<String>,
    standardize: bool,
) -> Result<Source, CliError> {
    let source = match (input, gen) {
        (Some(_), Some(_)) => {
            return Err(CliError::config(
                "give exactly one input source: --input or --gen",
            ))
        }
        (None, None) => {
            return Err(CliError::config(
                "an input source is required: --input or --gen",
            ))
        }
        (Some(path), None) => Source {
            ds: load_csv_auto(path)
                .map_err(|e| CliError::config(format!("cannot load {}: {e}", path.display())))?,
            default_k: None,
        },
        (None, Some(spec)) => {
            let spec = GenSpec::parse(spec).map_err(|e| CliError::config(e.to_string()))?;
            Source {
                ds: spec
                    .generate()
                    .map_err(|e| CliError::config(e.to_string()))?,
                default_k: Some(spec.default_k()),
            }
        }
    };
    Ok(if standardize {
        Source {
            ds: source.ds.standardized(),
            default_k: source.default_k,
        }
    } else {
        source
    })
}

fn bf_config(
    noise: Option<f64>,
    nfr: Option<usize>,
    sample: Option<f64>,
    phase1: &Option<String>,
    mode: Option<Mode>,
    seed: u64,
    default_k: Option<usize>,
) -> Result<BfConfig, CliError> {
    let phase1 = match phase1 {
        Some(spec) => parse_phase1(spec, seed).map_err(|e| CliError::config(e.to_string()))?,
        None => bacteria_farm::Phase1::KMeans(
            KMeansParams::new(default_k.unwrap_or(FALLBACK_K)).with_seed(seed),
        ),
    };
    let cfg = BfConfig {
        sample_fraction: sample.unwrap_or(DEFAULT_SAMPLE),
        noise_fraction: noise.unwrap_or(DEFAULT_NOISE),
        n_fr: nfr.unwrap_or(DEFAULT_NFR),
        phase1,
        seed,
        growth_mode: mode.map(GrowthMode::from).unwrap_or_default(),
    };
    cfg.validate()
        .map_err(|e| CliError::config(e.to_string()))?;
    Ok(cfg)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

/// Keeps every report cell free of CSV structure characters.
fn sanitize(s: &str) -> String {
    s.replace(',', ";").replace(['"', '\n'], " ")
}

pub fn cmd_run(args: RunArgs) -> Result<(), CliError> {
    let args = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::config(format!("cannot read config {}: {e}", path.display()))
            })?;
            let base: RunArgs = serde_json::from_str(&text)
                .map_err(|e| CliError::config(format!("bad config {}: {e}", path.display())))?;
            args.merged_over(base)
        }
        None => args,
    };

    let source = load_source(&args.input, &args.gen, args.standardize)?;
    let seed = args.seed.unwrap_or(0);
    if args.out_plot.is_some() && source.ds.dim() != 2 {
        return Err(CliError::config(format!(
            "--out-plot needs a 2-d dataset, got {} dimensions",
            source.ds.dim()
        )));
    }

    let spec = match args.algo.unwrap_or(Algo::BacteriaFarm) {
        Algo::BacteriaFarm => AlgoSpec::BacteriaFarm(bf_config(
            args.noise,
            args.nfr,
            args.sample,
            &args.phase1,
            args.mode,
            seed,
            source.default_k,
        )?),
        Algo::Kmeans => {
            let k = args.k.or(source.default_k).ok_or_else(|| {
                CliError::config("--algo kmeans needs --k when the input is a CSV file")
            })?;
            AlgoSpec::KMeans(KMeansParams::new(k).with_seed(seed))
        }
        Algo::Dbscan => AlgoSpec::Dbscan {
            eps: args.eps,
            min_pts: args.min_pts.unwrap_or(DEFAULT_MIN_PTS),
        },
    };

    let outcome =
        execute(&source.ds, &spec, args.no_timing).map_err(|e| CliError::runtime(e.to_string()))?;

    if let Some(path) = &args.out_labels {
        write_labels_csv(path, &outcome.assignment)
            .map_err(|e| CliError::runtime(format!("writing {}: {e}", path.display())))?;
    }
    if let Some(path) = &args.out_metrics {
        write_metrics_json(path, &outcome.report, outcome.growth_mode)
            .map_err(|e| CliError::runtime(format!("writing {}: {e}", path.display())))?;
    }
    if let Some(path) = &args.out_plot {
        write_scatter_svg(path, &source.ds, &outcome.assignment)
            .map_err(|e| CliError::runtime(format!("writing {}: {e}", path.display())))?;
    }

    let sil = fmt_opt(outcome.report.silhouette_mean);
    let ch = fmt_opt(outcome.report.calinski_harabasz);
    let mut line = format!(
        "algo={} n={} clusters={} clustered={} noise={} silhouette={} ch={}",
        spec_name(&spec),
        source.ds.n(),
        outcome.assignment.n_clusters(),
        outcome.report.n_clustered,
        outcome.report.n_noise,
        if sil.is_empty() { "undefined" } else { &sil },
        if ch.is_empty() { "undefined" } else { &ch },
    );
    if let Some(eps) = outcome.tuned_eps {
        write!(line, " eps={eps:.6}(tuned)").unwrap();
    }
    println!("{line}");
    Ok(())
}

fn spec_name(spec: &AlgoSpec) -> &'static str {
    match spec {
        AlgoSpec::BacteriaFarm(_) => "bacteria-farm",
        AlgoSpec::KMeans(_) => "kmeans",
        AlgoSpec::Dbscan { .. } => "dbscan",
    }
}

// ---------------------------------------------------------------- bench

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Suite {
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    standardize: bool,
    datasets: Vec<DatasetEntry>,
    algorithms: Vec<AlgoEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum DatasetEntry {
    Spec(String),
    Detailed(DetailedDataset),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DetailedDataset {
    #[serde(default)]
    gen: Option<String>,
    #[serde(default)]
    path: Option<PathBuf>,
    #[serde(default)]
    k: Option<usize>,
    #[serde(default)]
    name: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "algo", rename_all = "kebab-case", deny_unknown_fields)]
enum AlgoEntry {
    BacteriaFarm {
        #[serde(default)]
        noise: Option<f64>,
        #[serde(default)]
        nfr: Option<usize>,
        #[serde(default)]
        sample: Option<f64>,
        #[serde(default)]
        mode: Option<Mode>,
        #[serde(default)]
        phase1: Option<String>,
    },
    Kmeans {
        #[serde(default)]
        k: Option<usize>,
    },
    Dbscan {
        #[serde(default)]
        eps: Option<f64>,
        #[serde(default)]
        min_pts: Option<usize>,
    },
}

impl AlgoEntry {
    fn name(&self) -> &'static str {
        match self {
            AlgoEntry::BacteriaFarm { .. } => "bacteria-farm",
            AlgoEntry::Kmeans { .. } => "kmeans",
            AlgoEntry::Dbscan { .. } => "dbscan",
        }
    }

    fn resolve(&self, default_k: Option<usize>, seed: u64) -> Result<AlgoSpec, CliError> {
        match self {
            AlgoEntry::BacteriaFarm {
                noise,
                nfr,
                sample,
                mode,
                phase1,
            } => Ok(AlgoSpec::BacteriaFarm(bf_config(
                *noise, *nfr, *sample, phase1, *mode, seed, default_k,
            )?)),
            AlgoEntry::Kmeans { k } => {
                let k = k.or(default_k).ok_or_else(|| {
                    CliError::config("kmeans suite entry needs k for CSV datasets")
                })?;
                Ok(AlgoSpec::KMeans(KMeansParams::new(k).with_seed(seed)))
            }
            AlgoEntry::Dbscan { eps, min_pts } => Ok(AlgoSpec::Dbscan {
                eps: *eps,
                min_pts: min_pts.unwrap_or(DEFAULT_MIN_PTS),
            }),
        }
    }
}

struct BenchDataset {
    name: String,
    ds: Dataset64,
    default_k: Option<usize>,
}

fn resolve_dataset(entry: &DatasetEntry, standardize: bool) -> Result<BenchDataset, CliError> {
    let (gen, path, k, name) = match entry {
        DatasetEntry::Spec(s) => (Some(s.clone()), None, None, None),
        DatasetEntry::Detailed(d) => (d.gen.clone(), d.path.clone(), d.k, d.name.clone()),
    };
    let source = load_source(&path, &gen, standardize)?;
    let name = name.unwrap_or_else(|| match (&gen, &path) {
        (Some(s), _) => sanitize(s),
        (_, Some(p)) => sanitize(&p.display().to_string()),
        _ => unreachable!("load_source enforced a source"),
    });
    Ok(BenchDataset {
        name,
        ds: source.ds,
        default_k: k.or(source.default_k),
    })
}

const BENCH_HEADER: &str =
    "dataset,algorithm,silhouette_mean,calinski_harabasz,n_clustered,n_noise,wall_time_ms,growth_mode,params,error";

pub fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.suite).map_err(|e| {
        CliError::config(format!("cannot read suite {}: {e}", args.suite.display()))
    })?;
    let suite: Suite = serde_json::from_str(&text)
        .map_err(|e| CliError::config(format!("bad suite {}: {e}", args.suite.display())))?;
    if suite.datasets.is_empty() || suite.algorithms.is_empty() {
        return Err(CliError::config(
            "suite needs at least one dataset and one algorithm",
        ));
    }
    let seed = suite.seed.unwrap_or(0);

    let datasets = suite
        .datasets
        .iter()
        .map(|d| resolve_dataset(d, suite.standardize))
        .collect::<Result<Vec<_>, _>>()?;

    let mut out = String::from(BENCH_HEADER);
    out.push('\n');
    // per-algorithm accumulators for the average rows
    struct Acc {
        sil: Vec<f64>,
        ch: Vec<f64>,
        clustered: Vec<f64>,
        noise: Vec<f64>,
        wall: Vec<f64>,
    }
    let mut accs: Vec<Acc> = suite
        .algorithms
        .iter()
        .map(|_| Acc {
            sil: vec![],
            ch: vec![],
            clustered: vec![],
            noise: vec![],
            wall: vec![],
        })
        .collect();

    for data in &datasets {
        for (ai, entry) in suite.algorithms.iter().enumerate() {
            // per-cell failures are recorded and the run continues
            let cell: Result<(AlgoSpec, RunOutcome), String> = entry
                .resolve(data.default_k, seed)
                .map_err(|e| e.message)
                .and_then(|spec| {
                    execute(&data.ds, &spec, args.no_timing)
                        .map(|out| (spec, out))
                        .map_err(|e| e.to_string())
                });
            match cell {
                Ok((spec, outcome)) => {
                    let report = &outcome.report;
                    if let Some(s) = report.silhouette_mean {
                        accs[ai].sil.push(s);
                    }
                    if let Some(c) = report.calinski_harabasz {
                        accs[ai].ch.push(c);
                    }
                    accs[ai].clustered.push(report.n_clustered as f64);
                    accs[ai].noise.push(report.n_noise as f64);
                    accs[ai].wall.push(report.wall_time_ms);
                    let mut params = spec.describe();
                    if let Some(eps) = outcome.tuned_eps {
                        write!(params, ";eps_tuned={eps:.6}").unwrap();
                    }
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{:.6},{},{},",
                        data.name,
                        entry.name(),
                        fmt_opt(report.silhouette_mean),
                        fmt_opt(report.calinski_harabasz),
                        report.n_clustered,
                        report.n_noise,
                        report.wall_time_ms,
                        outcome
                            .growth_mode
                            .map(|m| m.to_string())
                            .unwrap_or_default(),
                        sanitize(&params),
                    )
                    .unwrap();
                }
                Err(message) => {
                    writeln!(
                        out,
                        "{},{},,,,,,,,{}",
                        data.name,
                        entry.name(),
                        sanitize(&message)
                    )
                    .unwrap();
                }
            }
        }
    }

    let mean = |v: &[f64]| -> Option<f64> {
        if v.is_empty() {
            None
        } else {
            Some(v.iter().sum::<f64>() / v.len() as f64)
        }
    };
    for (entry, acc) in suite.algorithms.iter().zip(&accs) {
        writeln!(
            out,
            "average,{},{},{},{},{},{},,,",
            entry.name(),
            fmt_opt(mean(&acc.sil)),
            fmt_opt(mean(&acc.ch)),
            fmt_opt(mean(&acc.clustered)),
            fmt_opt(mean(&acc.noise)),
            fmt_opt(mean(&acc.wall)),
        )
        .unwrap();
        println!(
            "{}: mean silhouette {} over {} cells",
            entry.name(),
            fmt_opt(mean(&acc.sil)),
            acc.clustered.len(),
        );
    }

    fs::write(&args.out, out)
        .map_err(|e| CliError::runtime(format!("writing {}: {e}", args.out.display())))?;
    Ok(())
}

// ------------------------------------------------------------ sweep-nfr

pub fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    if args.values.is_empty() {
        return Err(CliError::config("--values needs at least one count"));
    }
    let source = load_source(&args.input, &args.gen, args.standardize)?;
    let seed = args.seed.unwrap_or(0);

    let mut outcomes: Vec<RunOutcome> = Vec::with_capacity(args.values.len());
    for &nfr in &args.values {
        let cfg = bf_config(
            args.noise,
            Some(nfr),
            args.sample,
            &args.phase1,
            args.mode,
            seed,
            source.default_k,
        )?;
        let outcome = execute(&source.ds, &AlgoSpec::BacteriaFarm(cfg), args.no_timing)
            .map_err(|e| CliError::runtime(format!("nfr={nfr}: {e}")))?;
        outcomes.push(outcome);
    }

    fs::create_dir_all(&args.out)
        .map_err(|e| CliError::runtime(format!("creating {}: {e}", args.out.display())))?;

    let header: Vec<String> = args.values.iter().map(|v| v.to_string()).collect();
    let mut agreement = format!("nfr,{}\n", header.join(","));
    let mut min_agreement = 1.0f64;
    for (i, a) in outcomes.iter().enumerate() {
        let mut row = vec![args.values[i].to_string()];
        for (j, b) in outcomes.iter().enumerate() {
            let value = label_agreement(&a.assignment, &b.assignment);
            if i != j {
                min_agreement = min_agreement.min(value);
            }
            row.push(format!("{value:.6}"));
        }
        agreement.push_str(&row.join(","));
        agreement.push('\n');
    }
    let agreement_path = args.out.join("agreement.csv");
    fs::write(&agreement_path, agreement)
        .map_err(|e| CliError::runtime(format!("writing {}: {e}", agreement_path.display())))?;

    let mut metrics =
        String::from("nfr,silhouette_mean,calinski_harabasz,n_clustered,n_noise,wall_time_ms\n");
    for (v, outcome) in args.values.iter().zip(&outcomes) {
        writeln!(
            metrics,
            "{},{},{},{},{},{:.6}",
            v,
            fmt_opt(outcome.report.silhouette_mean),
            fmt_opt(outcome.report.calinski_harabasz),
            outcome.report.n_clustered,
            outcome.report.n_noise,
            outcome.report.wall_time_ms,
        )
        .unwrap();
    }
    let metrics_path = args.out.join("metrics.csv");
    fs::write(&metrics_path, metrics)
        .map_err(|e| CliError::runtime(format!("writing {}: {e}", metrics_path.display())))?;

    if source.ds.dim() == 2 {
        for (v, outcome) in args.values.iter().zip(&outcomes) {
            let path = args.out.join(format!("nfr_{v}.svg"));
            write_scatter_svg(&path, &source.ds, &outcome.assignment)
                .map_err(|e| CliError::runtime(format!("writing {}: {e}", path.display())))?;
        }
    }

    println!("min pairwise agreement: {min_agreement:.6}");
    Ok(())
}
