//! Per-point cluster labels; unlabeled points are noise.

use std::collections::BTreeMap;

/// Optional cluster label for every point of a dataset, in point order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    labels: Vec<Option<usize>>,
}

impl Assignment {
    pub fn new(labels: Vec<Option<usize>>) -> Self {
        Self { labels }
    }

    /// All-noise assignment over `n` points.
    pub fn noise(n: usize) -> Self {
        Self {
            labels: vec![None; n],
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> Option<usize> {
        self.labels[i]
    }

    pub fn labels(&self) -> &[Option<usize>] {
        &self.labels
    }

    pub fn set(&mut self, i: usize, cluster: usize) {
        self.labels[i] = Some(cluster);
    }

    pub fn n_labeled(&self) -> usize {
        self.labels.iter().filter(|l| l.is_some()).count()
    }

    pub fn n_noise(&self) -> usize {
        self.len() - self.n_labeled()
    }

    /// Point indices grouped by cluster id, ids ascending. Empty ids do
    /// not appear.
    pub fn clusters(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, l) in self.labels.iter().enumerate() {
            if let Some(c) = l {
                map.entry(*c).or_default().push(i);
            }
        }
        map
    }

    /// Number of distinct nonempty clusters.
    pub fn n_clusters(&self) -> usize {
        self.clusters().len()
    }
}

/// Fraction of points on which two assignments agree under the best
/// bijective relabeling, with noise matching only noise.
///
/// The optimal matching is found by exhaustive search over label
/// permutations, which is exact and fine for the small cluster counts
/// this crate works with (caps at 8 distinct labels).
pub fn label_agreement(a: &Assignment, b: &Assignment) -> f64 {
    assert_eq!(a.len(), b.len(), "assignments cover different datasets");
    if a.is_empty() {
        return 1.0;
    }
    let ids_a: Vec<usize> = a.clusters().into_keys().collect();
    let ids_b: Vec<usize> = b.clusters().into_keys().collect();
    // Map `a` ids through permutations of the larger side; smaller side
    // is padded conceptually by leaving unmatched ids agreement-less.
    let (small_ids, large_ids, a_is_small) = if ids_a.len() <= ids_b.len() {
        (ids_a, ids_b, true)
    } else {
        (ids_b, ids_a, false)
    };
    assert!(
        large_ids.len() <= 8,
        "label_agreement supports at most 8 distinct labels"
    );
    let noise_matches = a
        .labels()
        .iter()
        .zip(b.labels())
        .filter(|(x, y)| x.is_none() && y.is_none())
        .count();
    // overlap[s][l]: points with small-side id s and large-side id l
    let mut overlap = vec![vec![0usize; large_ids.len()]; small_ids.len()];
    for (la, lb) in a.labels().iter().zip(b.labels()) {
        let (ls, ll) = if a_is_small { (la, lb) } else { (lb, la) };
        if let (Some(s), Some(l)) = (ls, ll) {
            let si = small_ids.iter().position(|x| x == s).unwrap();
            let li = large_ids.iter().position(|x| x == l).unwrap();
            overlap[si][li] += 1;
        }
    }
    let best = best_matching(&overlap, large_ids.len());
    (noise_matches + best) as f64 / a.len() as f64
}

/// Maximum total overlap over injective matchings of rows into columns,
/// by either exhaustive column permutations (few columns) or recursive
/// row-wise branch (few rows).
fn best_matching(overlap: &[Vec<usize>], n_cols: usize) -> usize {
    fn rec(overlap: &[Vec<usize>], row: usize, used: &mut [bool], acc: usize, best: &mut usize) {
        if row == overlap.len() {
            *best = (*best).max(acc);
            return;
        }
        // leave this row unmatched
        rec(overlap, row + 1, used, acc, best);
        for col in 0..used.len() {
            if !used[col] {
                used[col] = true;
                rec(overlap, row + 1, used, acc + overlap[row][col], best);
                used[col] = false;
            }
        }
    }
    let mut best = 0;
    let mut used = vec![false; n_cols];
    rec(overlap, 0, &mut used, 0, &mut best);
    best
}
