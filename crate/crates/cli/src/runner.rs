//! Algorithm dispatch and timing. The wall clock runs around the
//! algorithm only (never I/O or metric computation), matching how the
//! timings are meant to be compared.

use std::time::Instant;

use bacteria_farm::{
    dbscan, fit, kmeans, tune_dbscan_eps, Assignment, BfConfig, Dataset64, DbscanParams,
    GrowthMode, KMeansParams, MetricsReport, Result,
};

/// Grid size for the DBSCAN eps scan when no eps is given.
pub const EPS_GRID: usize = 30;

#[derive(Debug, Clone)]
pub enum AlgoSpec {
    BacteriaFarm(BfConfig),
    KMeans(KMeansParams),
    /// `eps: None` runs the grid tuner.
    Dbscan {
        eps: Option<f64>,
        min_pts: usize,
    },
}

impl AlgoSpec {
    pub fn growth_mode(&self) -> Option<GrowthMode> {
        match self {
            AlgoSpec::BacteriaFarm(cfg) => Some(cfg.growth_mode),
            _ => None,
        }
    }

    /// Compact parameter description for reports (no commas: the bench
    /// CSV relies on comma-free cells).
    pub fn describe(&self) -> String {
        match self {
            AlgoSpec::BacteriaFarm(cfg) => format!(
                "noise={};nfr={};sample={};mode={};seed={}",
                cfg.noise_fraction, cfg.n_fr, cfg.sample_fraction, cfg.growth_mode, cfg.seed
            ),
            AlgoSpec::KMeans(p) => format!("k={};seed={}", p.k, p.seed),
            AlgoSpec::Dbscan { eps, min_pts } => match eps {
                Some(e) => format!("eps={e};min_pts={min_pts}"),
                None => format!("eps=tuned;min_pts={min_pts}"),
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub assignment: Assignment,
    pub report: MetricsReport,
    pub growth_mode: Option<GrowthMode>,
    /// Present when the DBSCAN tuner picked the radius.
    pub tuned_eps: Option<f64>,
}

/// Runs one algorithm on one dataset and computes the metrics.
/// `no_timing` zeroes the recorded wall time so downstream files are
/// byte-reproducible.
pub fn execute(ds: &Dataset64, spec: &AlgoSpec, no_timing: bool) -> Result<RunOutcome> {
    let started = Instant::now();
    let (assignment, tuned_eps) = match spec {
        AlgoSpec::BacteriaFarm(cfg) => (fit(ds, cfg)?.assignment, None),
        AlgoSpec::KMeans(params) => (kmeans(ds, params)?.0, None),
        AlgoSpec::Dbscan { eps, min_pts } => match eps {
            Some(eps) => (dbscan(ds, &DbscanParams::new(*eps, *min_pts))?, None),
            None => {
                let tuned = tune_dbscan_eps(ds, *min_pts, EPS_GRID)?;
                (tuned.assignment, Some(tuned.eps))
            }
        },
    };
    let wall_time_ms = if no_timing {
        0.0
    } else {
        started.elapsed().as_secs_f64() * 1e3
    };
    let report = MetricsReport::compute(ds, &assignment, wall_time_ms);
    Ok(RunOutcome {
        assignment,
        report,
        growth_mode: spec.growth_mode(),
        tuned_eps,
    })
}
