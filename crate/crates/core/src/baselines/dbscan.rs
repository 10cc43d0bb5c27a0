//! Classic DBSCAN with core/border/noise semantics, backed by the
//! spatial index for neighborhood queries.

use std::collections::VecDeque;

use crate::assignment::Assignment;
use crate::dataset::Dataset;
use crate::error::Error;
use crate::metrics::silhouette_mean;
use crate::scalar::Scalar;
use crate::spatial::SpatialIndex;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct DbscanParams {
    /// Neighborhood radius (inclusive).
    pub eps: f64,
    /// Minimum neighborhood size, the point itself included, for a
    /// point to be core.
    pub min_pts: usize,
}

impl DbscanParams {
    pub fn new(eps: f64, min_pts: usize) -> Self {
        Self { eps, min_pts }
    }

    pub fn validate(&self) -> Result<()> {
        if self.eps <= 0.0 || self.eps.is_nan() {
            return Err(Error::InvalidArgument("dbscan requires eps > 0".into()));
        }
        if self.min_pts < 1 {
            return Err(Error::InvalidArgument(
                "dbscan requires min_pts >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Density clustering: clusters are maximal density-connected sets of
/// points, noise stays unlabeled. Cluster ids follow first-touch scan
/// order, so the result is deterministic.
pub fn dbscan<F: Scalar>(ds: &Dataset<F>, params: &DbscanParams) -> Result<Assignment> {
    params.validate()?;
    let n = ds.n();
    let eps = F::from_f64_lossy(params.eps);
    let index = SpatialIndex::build(ds);
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|i| index.within_radius(ds.coords(i), eps))
        .collect();
    let is_core: Vec<bool> = neighbors
        .iter()
        .map(|nb| nb.len() >= params.min_pts)
        .collect();

    let mut labels: Vec<Option<usize>> = vec![None; n];
    let mut claimed = vec![false; n];
    let mut next_id = 0usize;
    for i in 0..n {
        if claimed[i] || !is_core[i] {
            continue;
        }
        let id = next_id;
        next_id += 1;
        claimed[i] = true;
        labels[i] = Some(id);
        let mut queue = VecDeque::from([i]);
        while let Some(j) = queue.pop_front() {
            if !is_core[j] {
                continue; // border points join but do not expand
            }
            for &nb in &neighbors[j] {
                if !claimed[nb] {
                    claimed[nb] = true;
                    labels[nb] = Some(id);
                    queue.push_back(nb);
                }
            }
        }
    }
    Ok(Assignment::new(labels))
}

/// Result of an eps grid scan.
#[derive(Debug, Clone)]
pub struct TunedDbscan {
    pub eps: f64,
    pub assignment: Assignment,
}

/// Scans `n_grid` eps values between 1% and 30% of the bounding-box
/// diagonal and keeps the one with the best (coverage tier, silhouette)
/// pair, ties to the smallest eps. Coverage tiers prefer labelings that
/// keep at least 90%, then at least 50%, of the points.
///
/// Errors when no eps in the grid yields two or more clusters.
pub fn tune_dbscan_eps<F: Scalar>(
    ds: &Dataset<F>,
    min_pts: usize,
    n_grid: usize,
) -> Result<TunedDbscan> {
    if n_grid < 1 {
        return Err(Error::InvalidArgument(
            "eps grid needs at least one value".into(),
        ));
    }
    let diag = bounding_diagonal(ds);
    if diag <= 0.0 || diag.is_nan() {
        return Err(Error::InvalidArgument(
            "degenerate dataset: zero bounding box".into(),
        ));
    }
    let lo = 0.01 * diag;
    let hi = 0.30 * diag;
    let mut best: Option<(u8, f64, TunedDbscan)> = None;
    for g in 0..n_grid {
        let t = if n_grid == 1 {
            0.0
        } else {
            g as f64 / (n_grid - 1) as f64
        };
        let eps = lo + t * (hi - lo);
        let assignment = dbscan(ds, &DbscanParams::new(eps, min_pts))?;
        if assignment.n_clusters() < 2 {
            continue;
        }
        let coverage = assignment.n_labeled() as f64 / ds.n() as f64;
        let tier = if coverage >= 0.9 {
            2
        } else if coverage >= 0.5 {
            1
        } else {
            0
        };
        let sil = match silhouette_mean(ds, &assignment) {
            Ok(s) => s.to_f64_lossy(),
            Err(_) => continue,
        };
        let better = match &best {
            None => true,
            Some((bt, bs, _)) => (tier, sil) > (*bt, *bs),
        };
        if better {
            best = Some((tier, sil, TunedDbscan { eps, assignment }));
        }
    }
    best.map(|(_, _, t)| t).ok_or_else(|| {
        Error::InvalidArgument("no eps in the scanned grid produced >= 2 clusters".into())
    })
}

fn bounding_diagonal<F: Scalar>(ds: &Dataset<F>) -> f64 {
    let dim = ds.dim();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for p in ds.points() {
        for (d, &c) in p.coords().iter().enumerate() {
            let v = c.to_f64_lossy();
            lo[d] = lo[d].min(v);
            hi[d] = hi[d].max(v);
        }
    }
    lo.iter()
        .zip(&hi)
        .map(|(&a, &b)| (b - a) * (b - a))
        .sum::<f64>()
        .sqrt()
}
