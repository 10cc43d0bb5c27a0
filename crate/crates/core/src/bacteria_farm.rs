//! The two-phase noise-budgeted clustering algorithm.
//!
//! Phase 1 clusters a random sample with a standard algorithm and
//! extracts a [`SeedModel`]: per-cluster centroids, proportions, and
//! integer point budgets scaled down by the requested noise fraction.
//! Phase 2 grows each cluster outward from its centroid: at every step
//! the globally closest alive point to the cluster's bounded
//! front-runner set is absorbed, and the frontier is updated so it
//! tracks the cluster periphery. A cluster stops at its budget; points
//! left alive at the end are the declared noise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::assignment::Assignment;
use crate::baselines::{Clusterer, Phase1};
use crate::dataset::{Dataset, Point};
use crate::error::Error;
use crate::scalar::Scalar;
use crate::spatial::SpatialIndex;
use crate::Result;

/// Order in which clusters consume their budgets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GrowthMode {
    /// Grow each cluster to its full budget before starting the next.
    #[default]
    Sequential,
    /// Interleave one assignment per unfinished cluster per round.
    RoundRobin,
}

impl std::fmt::Display for GrowthMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GrowthMode::Sequential => write!(f, "sequential"),
            GrowthMode::RoundRobin => write!(f, "round-robin"),
        }
    }
}

impl std::str::FromStr for GrowthMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sequential" => Ok(GrowthMode::Sequential),
            "round-robin" | "round_robin" => Ok(GrowthMode::RoundRobin),
            other => Err(Error::InvalidArgument(format!(
                "unknown growth mode {other:?}; expected sequential or round-robin"
            ))),
        }
    }
}

/// Configuration for a full fit.
#[derive(Debug, Clone, PartialEq)]
pub struct BfConfig {
    /// Fraction of the dataset sampled for phase 1, in (0, 1].
    pub sample_fraction: f64,
    /// Fraction of the dataset to leave unassigned, in [0, 1).
    pub noise_fraction: f64,
    /// Frontier capacity per cluster.
    pub n_fr: usize,
    /// Seeding algorithm run on the sample.
    pub phase1: Phase1,
    pub seed: u64,
    pub growth_mode: GrowthMode,
}

impl BfConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sample_fraction > 0.0 && self.sample_fraction <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "sample_fraction must be in (0, 1], got {}",
                self.sample_fraction
            )));
        }
        if !(0.0..1.0).contains(&self.noise_fraction) {
            return Err(Error::InvalidArgument(format!(
                "noise_fraction must be in [0, 1), got {}",
                self.noise_fraction
            )));
        }
        if self.n_fr < 1 {
            return Err(Error::InvalidArgument("n_fr must be at least 1".into()));
        }
        Ok(())
    }
}

/// Phase-1 output: one centroid, proportion, and point budget per
/// cluster, in phase-1 cluster-id order.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedModel<F> {
    pub centroids: Vec<Point<F>>,
    /// Cluster share of the clustered sample points; sums to 1.
    pub proportions: Vec<f64>,
    /// Point budgets: `round(proportion * (1 - noise_fraction) * n)`.
    pub thresholds: Vec<usize>,
}

impl<F> SeedModel<F> {
    pub fn n_clusters(&self) -> usize {
        self.centroids.len()
    }

    pub fn total_budget(&self) -> usize {
        self.thresholds.iter().sum()
    }
}

/// One growing cluster's bounded frontier. Entries are either the seed
/// centroid coordinate (present only until the first point joins) or
/// indices of current cluster members.
#[derive(Debug, Clone, PartialEq)]
pub enum FrontRunner<F> {
    /// The seed centroid: a coordinate, not a dataset member.
    Centroid(Point<F>),
    Member(usize),
}

#[derive(Debug, Clone)]
pub struct FrontRunnerSet<F> {
    cluster_id: usize,
    capacity: usize,
    entries: Vec<FrontRunner<F>>,
}

impl<F: Scalar> FrontRunnerSet<F> {
    /// Frontier seeded with the virtual centroid as its only entry.
    pub fn new(cluster_id: usize, centroid: Point<F>, capacity: usize) -> Self {
        assert!(capacity >= 1, "frontier capacity must be at least 1");
        Self {
            cluster_id,
            capacity,
            entries: vec![FrontRunner::Centroid(centroid)],
        }
    }

    pub fn cluster_id(&self) -> usize {
        self.cluster_id
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn entries(&self) -> &[FrontRunner<F>] {
        &self.entries
    }

    pub fn has_virtual_centroid(&self) -> bool {
        self.entries
            .iter()
            .any(|e| matches!(e, FrontRunner::Centroid(_)))
    }

    /// Coordinates of every entry, in entry order, for a frontier
    /// query.
    pub fn query_coords<'a>(&'a self, ds: &'a Dataset<F>) -> Vec<&'a [F]> {
        self.entries
            .iter()
            .map(|e| match e {
                FrontRunner::Centroid(p) => p.coords(),
                FrontRunner::Member(i) => ds.coords(*i),
            })
            .collect()
    }

    /// Folds a newly assigned point into the frontier. `nearest_entry`
    /// is the entry closest to the new point (the query position the
    /// frontier search reported): the virtual centroid is replaced the
    /// first time it is that entry, members are appended while there is
    /// room and replace their nearest front-runner once the frontier is
    /// full.
    pub fn advance(&mut self, new_member: usize, nearest_entry: usize) {
        match self.entries[nearest_entry] {
            FrontRunner::Centroid(_) => {
                self.entries[nearest_entry] = FrontRunner::Member(new_member);
            }
            FrontRunner::Member(_) => {
                if self.entries.len() < self.capacity {
                    self.entries.push(FrontRunner::Member(new_member));
                } else {
                    self.entries[nearest_entry] = FrontRunner::Member(new_member);
                }
            }
        }
        debug_assert!(self.entries.len() <= self.capacity);
    }
}

/// Result of the growth phase.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowOutcome {
    pub assignment: Assignment,
    /// True when the dataset ran out of points before every budget was
    /// met (possible when rounding oversubscribes the budgets).
    pub exhausted: bool,
}

/// Result of a full fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult<F> {
    pub assignment: Assignment,
    pub model: SeedModel<F>,
    pub exhausted: bool,
}

fn round_half_up(v: f64) -> usize {
    debug_assert!(v >= 0.0);
    v.round() as usize
}

/// Draws the phase-1 sample (uniform, without replacement, seeded) and
/// extracts the seed model from it. The sampled indices are sorted, so
/// a full-fraction sample is the dataset itself.
pub fn sample_phase<F: Scalar>(ds: &Dataset<F>, cfg: &BfConfig) -> Result<SeedModel<F>> {
    cfg.validate()?;
    let n = ds.n();
    let m = round_half_up(cfg.sample_fraction * n as f64);
    let needed = cfg.phase1.min_sample_size().max(1);
    if m < needed {
        return Err(Error::Seeding(format!(
            "sample of {m} points is smaller than the phase-1 minimum of {needed}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut indices = rand::seq::index::sample(&mut rng, n, m).into_vec();
    indices.sort_unstable();
    let sample = ds.subset(&indices)?;
    retrieve_parameters(&sample, cfg.noise_fraction, &cfg.phase1, n)
}

/// Runs the phase-1 clusterer on the sample and turns its labeling into
/// a seed model: centroid = mean of each cluster's members, proportion
/// = cluster share of the clustered sample points (phase-1 noise is
/// excluded from the denominator), budget = proportion scaled by
/// `(1 - noise_fraction)` times the full dataset size, rounded half-up.
pub fn retrieve_parameters<F: Scalar>(
    sample: &Dataset<F>,
    noise_fraction: f64,
    phase1: &Phase1,
    n_total: usize,
) -> Result<SeedModel<F>> {
    if !(0.0..1.0).contains(&noise_fraction) {
        return Err(Error::InvalidArgument(format!(
            "noise_fraction must be in [0, 1), got {noise_fraction}"
        )));
    }
    let labeling = phase1.cluster(sample)?;
    let clusters = labeling.clusters();
    if clusters.is_empty() {
        return Err(Error::Seeding(
            "phase-1 clustering labeled every sample point as noise".into(),
        ));
    }
    let clustered_total: usize = clusters.values().map(Vec::len).sum();
    let dim = sample.dim();
    let mut centroids = Vec::with_capacity(clusters.len());
    let mut proportions = Vec::with_capacity(clusters.len());
    let mut thresholds = Vec::with_capacity(clusters.len());
    for members in clusters.values() {
        let mut mean = vec![F::zero(); dim];
        for &i in members {
            for (m, &c) in mean.iter_mut().zip(sample.coords(i)) {
                *m += c;
            }
        }
        let size = F::from_usize(members.len()).unwrap();
        for m in &mut mean {
            *m /= size;
        }
        centroids.push(Point::new(mean)?);
        let proportion = members.len() as f64 / clustered_total as f64;
        proportions.push(proportion);
        thresholds.push(round_half_up(
            proportion * (1.0 - noise_fraction) * n_total as f64,
        ));
    }
    Ok(SeedModel {
        centroids,
        proportions,
        thresholds,
    })
}

/// Grows every cluster to its budget over the full dataset. Each step
/// takes the globally closest alive point to the growing cluster's
/// frontier (ties by smallest point index, then smallest front-runner
/// position), assigns it, and retires it from the index. Points are
/// never reassigned; whatever stays alive at the end is noise.
pub fn grow_clusters<F: Scalar>(
    ds: &Dataset<F>,
    model: &SeedModel<F>,
    cfg: &BfConfig,
) -> Result<GrowOutcome> {
    cfg.validate()?;
    let k = model.n_clusters();
    let mut index = SpatialIndex::build(ds);
    let mut assignment = Assignment::noise(ds.n());
    let mut frontiers: Vec<FrontRunnerSet<F>> = model
        .centroids
        .iter()
        .enumerate()
        .map(|(c, centroid)| FrontRunnerSet::new(c, centroid.clone(), cfg.n_fr))
        .collect();
    let mut sizes = vec![0usize; k];
    let mut exhausted = false;

    let grow_one = |cluster: usize,
                    index: &mut SpatialIndex<F>,
                    assignment: &mut Assignment,
                    sizes: &mut [usize],
                    frontiers: &mut [FrontRunnerSet<F>]|
     -> Result<bool> {
        if index.alive_count() == 0 {
            return Ok(false);
        }
        let qs = frontiers[cluster].query_coords(ds);
        let (point, _dist, which_q) = index.nearest_alive_to_set(&qs)?;
        index.mark_assigned(point)?;
        assignment.set(point, cluster);
        sizes[cluster] += 1;
        frontiers[cluster].advance(point, which_q);
        debug_assert!(frontier_is_valid(
            &frontiers[cluster],
            assignment,
            sizes[cluster]
        ));
        Ok(true)
    };

    match cfg.growth_mode {
        GrowthMode::Sequential => {
            'clusters: for c in 0..k {
                while sizes[c] < model.thresholds[c] {
                    if !grow_one(c, &mut index, &mut assignment, &mut sizes, &mut frontiers)? {
                        exhausted = true;
                        break 'clusters;
                    }
                }
            }
        }
        GrowthMode::RoundRobin => {
            'rounds: while (0..k).any(|c| sizes[c] < model.thresholds[c]) {
                for c in 0..k {
                    if sizes[c] >= model.thresholds[c] {
                        continue;
                    }
                    if !grow_one(c, &mut index, &mut assignment, &mut sizes, &mut frontiers)? {
                        exhausted = true;
                        break 'rounds;
                    }
                }
            }
        }
    }
    Ok(GrowOutcome {
        assignment,
        exhausted,
    })
}

/// Frontier invariant, checked in debug builds after every step: the
/// virtual centroid survives only before the first assignment, every
/// member entry belongs to the cluster, and the frontier size is
/// `min(cluster size, capacity)` once the centroid is gone.
fn frontier_is_valid<F: Scalar>(
    frontier: &FrontRunnerSet<F>,
    assignment: &Assignment,
    cluster_size: usize,
) -> bool {
    let members_ok = frontier.entries().iter().all(|e| match e {
        FrontRunner::Centroid(_) => false, // gone after the first step
        FrontRunner::Member(i) => assignment.label(*i) == Some(frontier.cluster_id()),
    });
    members_ok && frontier.len() == cluster_size.min(frontier.capacity())
}

/// Runs both phases: seed from a sample, then grow the full dataset.
/// Deterministic for a fixed configuration.
pub fn fit<F: Scalar>(ds: &Dataset<F>, cfg: &BfConfig) -> Result<FitResult<F>> {
    let model = sample_phase(ds, cfg)?;
    let grown = grow_clusters(ds, &model, cfg)?;
    Ok(FitResult {
        assignment: grown.assignment,
        model,
        exhausted: grown.exhausted,
    })
}
