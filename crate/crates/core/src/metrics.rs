//! Internal clustering validation: Silhouette Coefficient and
//! Calinski-Harabasz Index.
//!
//! Both metrics are computed over labeled points only; noise is
//! excluded, and reports carry the noise count so the exclusion stays
//! visible. Pairwise work is quadratic in the labeled count, which is
//! fine at the dataset sizes this crate targets.

use crate::assignment::Assignment;
use crate::dataset::Dataset;
use crate::error::Error;
use crate::scalar::{dist, dist_sq, Scalar};
use crate::Result;

/// Labeled point indices grouped by cluster, ids ascending; checks the
/// assignment covers the dataset.
fn labeled_clusters<F: Scalar>(
    ds: &Dataset<F>,
    a: &Assignment,
) -> Result<Vec<(usize, Vec<usize>)>> {
    if a.len() != ds.n() {
        return Err(Error::DimensionMismatch {
            expected: ds.n(),
            found: a.len(),
        });
    }
    Ok(a.clusters().into_iter().collect())
}

/// Mean silhouette over labeled points.
///
/// Per point, `a(i)` is the mean distance to the other members of its
/// cluster and `b(i)` the smallest mean distance to any other cluster;
/// the score is `(b - a) / max(a, b)`, which reproduces the usual
/// piecewise definition. Points in singleton clusters score 0.
pub fn silhouette_mean<F: Scalar>(ds: &Dataset<F>, assignment: &Assignment) -> Result<F> {
    let clusters = labeled_clusters(ds, assignment)?;
    if clusters.len() < 2 {
        return Err(Error::UndefinedMetric(format!(
            "silhouette requires >= 2 nonempty clusters, found {}",
            clusters.len()
        )));
    }
    let mut total = F::zero();
    let mut count = 0usize;
    for (ci, (_, members)) in clusters.iter().enumerate() {
        for &i in members {
            let s = if members.len() == 1 {
                F::zero()
            } else {
                let own = F::from_usize(members.len() - 1).unwrap();
                let a_i = members
                    .iter()
                    .filter(|&&j| j != i)
                    .map(|&j| dist(ds.coords(i), ds.coords(j)))
                    .sum::<F>()
                    / own;
                let b_i = clusters
                    .iter()
                    .enumerate()
                    .filter(|(cj, _)| *cj != ci)
                    .map(|(_, (_, other))| {
                        other
                            .iter()
                            .map(|&j| dist(ds.coords(i), ds.coords(j)))
                            .sum::<F>()
                            / F::from_usize(other.len()).unwrap()
                    })
                    .fold(F::infinity(), F::min);
                let denom = a_i.max(b_i);
                if denom > F::zero() {
                    (b_i - a_i) / denom
                } else {
                    F::zero()
                }
            };
            total += s;
            count += 1;
        }
    }
    Ok(total / F::from_usize(count).unwrap())
}

/// Calinski-Harabasz index over labeled points:
/// `(SS_B / SS_W) * ((N - k) / (k - 1))` with `SS_B` the
/// centroid-to-grand-mean dispersion and `SS_W` the within-cluster
/// dispersion. Undefined for fewer than 2 clusters or when every
/// cluster is degenerate (`SS_W == 0`).
pub fn calinski_harabasz<F: Scalar>(ds: &Dataset<F>, assignment: &Assignment) -> Result<F> {
    let clusters = labeled_clusters(ds, assignment)?;
    let k = clusters.len();
    if k < 2 {
        return Err(Error::UndefinedMetric(format!(
            "calinski-harabasz requires >= 2 nonempty clusters, found {k}"
        )));
    }
    let dim = ds.dim();
    let n_labeled: usize = clusters.iter().map(|(_, m)| m.len()).sum();

    let mut grand = vec![F::zero(); dim];
    let mut centroids: Vec<Vec<F>> = Vec::with_capacity(k);
    for (_, members) in &clusters {
        let m = F::from_usize(members.len()).unwrap();
        let mut c = vec![F::zero(); dim];
        for &i in members {
            for (acc, &v) in c.iter_mut().zip(ds.coords(i)) {
                *acc += v;
            }
        }
        for (g, acc) in grand.iter_mut().zip(&mut c) {
            *g += *acc;
            *acc /= m;
        }
        centroids.push(c);
    }
    let nf = F::from_usize(n_labeled).unwrap();
    for g in &mut grand {
        *g /= nf;
    }

    let mut ss_b = F::zero();
    let mut ss_w = F::zero();
    for ((_, members), centroid) in clusters.iter().zip(&centroids) {
        ss_b += F::from_usize(members.len()).unwrap() * dist_sq(centroid, &grand);
        for &i in members {
            ss_w += dist_sq(ds.coords(i), centroid);
        }
    }
    if ss_w == F::zero() {
        return Err(Error::UndefinedMetric(
            "calinski-harabasz undefined: every cluster is degenerate (SS_W = 0)".into(),
        ));
    }
    let scale = F::from_usize(n_labeled - k).unwrap() / F::from_usize(k - 1).unwrap();
    Ok(ss_b / ss_w * scale)
}

/// Summary row for one clustering run. Metrics that were undefined for
/// the labeling are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub silhouette_mean: Option<f64>,
    pub calinski_harabasz: Option<f64>,
    pub n_clustered: usize,
    pub n_noise: usize,
    pub wall_time_ms: f64,
}

impl MetricsReport {
    /// Evaluates both metrics on an assignment, recording the supplied
    /// wall-clock time.
    pub fn compute<F: Scalar>(ds: &Dataset<F>, a: &Assignment, wall_time_ms: f64) -> Self {
        Self {
            silhouette_mean: silhouette_mean(ds, a).ok().map(Scalar::to_f64_lossy),
            calinski_harabasz: calinski_harabasz(ds, a).ok().map(Scalar::to_f64_lossy),
            n_clustered: a.n_labeled(),
            n_noise: a.n_noise(),
            wall_time_ms,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn asg(labels: &[i64]) -> Assignment {
        Assignment::new(
            labels
                .iter()
                .map(|&l| if l < 0 { None } else { Some(l as usize) })
                .collect(),
        )
    }

    #[test]
    fn silhouette_two_pairs_hand_value() {
        let ds = Dataset::from_rows(vec![
            vec![0.0, 0.0],
            vec![0.0, 1.0],
            vec![10.0, 0.0],
            vec![10.0, 1.0],
        ])
        .unwrap();
        let s = silhouette_mean(&ds, &asg(&[0, 0, 1, 1])).unwrap();
        // per point: a = 1, b = (10 + sqrt(101)) / 2, s = (b - a) / b
        let b = (10.0 + 101f64.sqrt()) / 2.0;
        let expected = (b - 1.0) / b;
        assert!((s - expected).abs() < 1e-12, "s={s}, expected={expected}");
    }

    #[test]
    fn silhouette_coincident_clusters_score_one() {
        let ds = Dataset::from_rows(vec![
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![7.0, 7.0],
            vec![7.0, 7.0],
        ])
        .unwrap();
        let s = silhouette_mean(&ds, &asg(&[0, 0, 1, 1])).unwrap();
        assert_eq!(s, 1.0);
    }

    #[test]
    fn silhouette_equidistant_tetrahedron_is_zero() {
        // regular tetrahedron: every pairwise distance is equal, so
        // a(i) == b(i) for all points and the mean silhouette is 0
        let ds = Dataset::from_rows(vec![
            vec![1.0, 1.0, 1.0],
            vec![1.0, -1.0, -1.0],
            vec![-1.0, 1.0, -1.0],
            vec![-1.0, -1.0, 1.0],
        ])
        .unwrap();
        let s: f64 = silhouette_mean(&ds, &asg(&[0, 0, 1, 1])).unwrap();
        assert!(s.abs() < 1e-12, "{s}");
    }

    #[test]
    fn silhouette_singletons_score_zero() {
        let ds = Dataset::from_rows(vec![vec![0.0], vec![10.0]]).unwrap();
        let s = silhouette_mean(&ds, &asg(&[0, 1])).unwrap();
        assert_eq!(s, 0.0);
    }

    #[test]
    fn silhouette_needs_two_clusters() {
        let ds = Dataset::from_rows(vec![vec![0.0], vec![1.0]]).unwrap();
        assert!(matches!(
            silhouette_mean(&ds, &asg(&[0, 0])),
            Err(Error::UndefinedMetric(_))
        ));
        assert!(matches!(
            silhouette_mean(&ds, &asg(&[-1, -1])),
            Err(Error::UndefinedMetric(_))
        ));
    }

    #[test]
    fn silhouette_excludes_noise() {
        let ds = Dataset::from_rows(vec![
            vec![0.0, 0.0],
            vec![0.0, 1.0],
            vec![10.0, 0.0],
            vec![10.0, 1.0],
            vec![500.0, 500.0],
        ])
        .unwrap();
        let with_noise = silhouette_mean(&ds, &asg(&[0, 0, 1, 1, -1])).unwrap();
        let ds4 = Dataset::from_rows(vec![
            vec![0.0, 0.0],
            vec![0.0, 1.0],
            vec![10.0, 0.0],
            vec![10.0, 1.0],
        ])
        .unwrap();
        let without = silhouette_mean(&ds4, &asg(&[0, 0, 1, 1])).unwrap();
        assert_eq!(with_noise, without);
    }

    #[test]
    fn ch_hand_example_is_fifty() {
        let ds = Dataset::from_rows(vec![
            vec![0.0, 0.0],
            vec![0.0, 2.0],
            vec![10.0, 0.0],
            vec![10.0, 2.0],
        ])
        .unwrap();
        let ch = calinski_harabasz(&ds, &asg(&[0, 0, 1, 1])).unwrap();
        assert_eq!(ch, 50.0);
    }

    #[test]
    fn ch_scale_invariant() {
        let rows: Vec<Vec<f64>> = vec![
            vec![0.0, 1.0],
            vec![0.5, 2.0],
            vec![10.0, 0.0],
            vec![11.0, 2.0],
            vec![5.0, 9.0],
            vec![6.0, 8.0],
        ];
        let labels = asg(&[0, 0, 1, 1, 2, 2]);
        let ds = Dataset::from_rows(rows.clone()).unwrap();
        let scaled = Dataset::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|v| v * 3.5).collect())
                .collect(),
        )
        .unwrap();
        let a = calinski_harabasz(&ds, &labels).unwrap();
        let b = calinski_harabasz(&scaled, &labels).unwrap();
        assert!((a - b).abs() < 1e-9 * a.abs());
    }

    #[test]
    fn ch_duplication_roughly_doubles_the_score() {
        // doubling every point doubles SS_B and SS_W, so the score
        // changes by exactly (2N - k) / (N - k), close to 2 for N >> k;
        // this is the size dependence that makes CH a secondary metric
        let rows: Vec<Vec<f64>> = (0..15)
            .map(|i| vec![0.1 * i as f64, 0.05 * (i % 4) as f64])
            .chain((0..15).map(|i| vec![10.0 + 0.1 * i as f64, 0.07 * (i % 3) as f64]))
            .collect();
        let labels: Vec<i64> = std::iter::repeat_n(0, 15)
            .chain(std::iter::repeat_n(1, 15))
            .collect();
        let ds = Dataset::from_rows(rows.clone()).unwrap();
        let doubled =
            Dataset::from_rows(rows.iter().cloned().chain(rows.iter().cloned()).collect()).unwrap();
        let labels2: Vec<i64> = labels.iter().chain(labels.iter()).copied().collect();
        let ch1 = calinski_harabasz(&ds, &asg(&labels)).unwrap();
        let ch2 = calinski_harabasz(&doubled, &asg(&labels2)).unwrap();
        let ratio = ch2 / ch1;
        let (n, k) = (30.0_f64, 2.0_f64);
        let expected = (2.0 * n - k) / (n - k);
        assert!((ratio - expected).abs() < 1e-9, "ratio={ratio}");
        assert!((1.8..=2.2).contains(&ratio), "ratio={ratio}");
    }

    #[test]
    fn ch_degenerate_clusters_are_undefined() {
        let ds = Dataset::from_rows(vec![vec![0.0], vec![0.0], vec![5.0], vec![5.0]]).unwrap();
        assert!(matches!(
            calinski_harabasz(&ds, &asg(&[0, 0, 1, 1])),
            Err(Error::UndefinedMetric(_))
        ));
    }

    #[test]
    fn report_records_counts_and_undefined_metrics() {
        let ds = Dataset::from_rows(vec![vec![0.0], vec![0.1], vec![9.0]]).unwrap();
        let r = MetricsReport::compute(&ds, &asg(&[0, 0, -1]), 12.5);
        assert_eq!(r.n_clustered, 2);
        assert_eq!(r.n_noise, 1);
        assert_eq!(r.wall_time_ms, 12.5);
        assert!(r.silhouette_mean.is_none());
        assert!(r.calinski_harabasz.is_none());
    }
}
