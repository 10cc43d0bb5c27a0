//! Lloyd's k-means with seeded k-means++ initialization.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assignment::Assignment;
use crate::dataset::{Dataset, Point};
use crate::error::Error;
use crate::scalar::{dist_sq, Scalar};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansParams {
    pub k: usize,
    pub max_iter: usize,
    /// Stop once the largest centroid shift falls to this value or
    /// below.
    pub tol: f64,
    pub seed: u64,
}

impl Default for KMeansParams {
    fn default() -> Self {
        Self {
            k: 2,
            max_iter: 100,
            tol: 1e-9,
            seed: 0,
        }
    }
}

impl KMeansParams {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::InvalidArgument("kmeans requires k >= 1".into()));
        }
        if self.max_iter < 1 {
            return Err(Error::InvalidArgument(
                "kmeans requires max_iter >= 1".into(),
            ));
        }
        if self.tol < 0.0 || self.tol.is_nan() {
            return Err(Error::InvalidArgument("kmeans requires tol >= 0".into()));
        }
        Ok(())
    }
}

/// Seeded k-means++: first center uniform, each further center drawn
/// with probability proportional to the squared distance to the nearest
/// chosen center. Weights are widened to `f64` so the drawn sequence
/// does not depend on the coordinate precision.
fn kmeans_pp_init<F: Scalar>(ds: &Dataset<F>, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<F>> {
    let n = ds.n();
    let mut centers: Vec<Vec<F>> = Vec::with_capacity(k);
    let mut chosen = vec![false; n];
    let first = rng.gen_range(0..n);
    centers.push(ds.coords(first).to_vec());
    chosen[first] = true;
    let mut d2: Vec<f64> = (0..n)
        .map(|i| dist_sq(ds.coords(i), &centers[0]).to_f64_lossy())
        .collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let r = rng.gen::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &w) in d2.iter().enumerate() {
                acc += w;
                if acc > r {
                    pick = Some(i);
                    break;
                }
            }
            // guard against the accumulated sum undershooting r
            pick.unwrap_or_else(|| d2.iter().rposition(|&w| w > 0.0).unwrap())
        } else {
            // all remaining points coincide with a center
            (0..n)
                .find(|&i| !chosen[i])
                .expect("k <= n leaves an unchosen point")
        };
        chosen[pick] = true;
        centers.push(ds.coords(pick).to_vec());
        let c = centers.last().unwrap();
        for (i, best) in d2.iter_mut().enumerate() {
            let nd = dist_sq(ds.coords(i), c).to_f64_lossy();
            if nd < *best {
                *best = nd;
            }
        }
    }
    centers
}

/// Index of the centroid nearest to point `i`, ties to the smallest
/// centroid index; also returns the squared distance.
fn nearest_centroid<F: Scalar>(coords: &[F], centroids: &[Vec<F>]) -> (usize, F) {
    let mut best = 0;
    let mut best_d2 = dist_sq(coords, &centroids[0]);
    for (c, centroid) in centroids.iter().enumerate().skip(1) {
        let d2 = dist_sq(coords, centroid);
        if d2 < best_d2 {
            best_d2 = d2;
            best = c;
        }
    }
    (best, best_d2)
}

/// Lloyd iterations from k-means++ initialization. Every point ends up
/// labeled; deterministic for a fixed seed.
///
/// If a cluster empties during an update it is reseeded to the dataset
/// point farthest from its previous centroid (ties to the smallest
/// index, points already claimed by another reseed in the same pass
/// excluded), and iteration continues.
pub fn kmeans<F: Scalar>(
    ds: &Dataset<F>,
    params: &KMeansParams,
) -> Result<(Assignment, Vec<Point<F>>)> {
    params.validate()?;
    let n = ds.n();
    let k = params.k;
    if n < k {
        return Err(Error::InvalidArgument(format!(
            "kmeans requires n >= k, got n={n}, k={k}"
        )));
    }
    let dim = ds.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut centroids = kmeans_pp_init(ds, k, &mut rng);
    let mut labels = vec![0usize; n];
    let mut prev_obj = f64::INFINITY;
    let mut reseeded_last_iter = false;

    for _ in 0..params.max_iter {
        // assignment step
        let mut obj = 0.0f64;
        for (i, label) in labels.iter_mut().enumerate() {
            let (c, d2) = nearest_centroid(ds.coords(i), &centroids);
            *label = c;
            obj += d2.to_f64_lossy();
        }
        // Lloyd never increases the objective, up to rounding; a reseed
        // is not a descent step and is exempt.
        if !reseeded_last_iter {
            debug_assert!(
                obj <= prev_obj * (1.0 + 1e-9) + 1e-12,
                "objective increased: {prev_obj} -> {obj}"
            );
        }
        prev_obj = obj;

        // update step
        let mut sums = vec![vec![F::zero(); dim]; k];
        let mut counts = vec![0usize; k];
        for i in 0..n {
            counts[labels[i]] += 1;
            for (s, &c) in sums[labels[i]].iter_mut().zip(ds.coords(i)) {
                *s += c;
            }
        }
        reseeded_last_iter = false;
        let mut reseed_used = vec![false; n];
        let mut shift_sq = F::zero();
        for c in 0..k {
            let new: Vec<F> = if counts[c] > 0 {
                let m = F::from_usize(counts[c]).unwrap();
                sums[c].iter().map(|&s| s / m).collect()
            } else {
                // farthest point from the empty cluster's old centroid
                let far = (0..n)
                    .filter(|&i| !reseed_used[i])
                    .max_by(|&a, &b| {
                        dist_sq(ds.coords(a), &centroids[c])
                            .partial_cmp(&dist_sq(ds.coords(b), &centroids[c]))
                            .expect("finite coordinates")
                            .then(b.cmp(&a)) // ties to the smallest index
                    })
                    .expect("nonempty dataset");
                reseed_used[far] = true;
                reseeded_last_iter = true;
                ds.coords(far).to_vec()
            };
            let s = dist_sq(&new, &centroids[c]);
            if s > shift_sq {
                shift_sq = s;
            }
            centroids[c] = new;
        }
        if !reseeded_last_iter && shift_sq.sqrt().to_f64_lossy() <= params.tol {
            break;
        }
    }

    // final assignment against the returned centroids
    for (i, label) in labels.iter_mut().enumerate() {
        *label = nearest_centroid(ds.coords(i), &centroids).0;
    }
    let assignment = Assignment::new(labels.into_iter().map(Some).collect());
    let centroid_points = centroids
        .into_iter()
        .map(Point::new)
        .collect::<Result<_>>()?;
    Ok((assignment, centroid_points))
}

/// Total within-cluster squared distance of an assignment against the
/// given centroids.
#[cfg(test)]
pub(crate) fn wcss<F: Scalar>(ds: &Dataset<F>, a: &Assignment, centroids: &[Point<F>]) -> f64 {
    (0..ds.n())
        .filter_map(|i| {
            a.label(i)
                .map(|c| dist_sq(ds.coords(i), centroids[c].coords()).to_f64_lossy())
        })
        .sum()
}
