//! Standard clusterers used both as the seeding phase and as comparison
//! subjects.

mod dbscan;
mod kmeans;

pub use dbscan::{dbscan, tune_dbscan_eps, DbscanParams, TunedDbscan};
pub use kmeans::{kmeans, KMeansParams};

use crate::assignment::Assignment;
use crate::dataset::Dataset;
use crate::scalar::Scalar;
use crate::Result;

/// Anything that can partition a dataset into labeled clusters, with
/// unlabeled points meaning noise. The seeding phase accepts any
/// implementation; the shipped selection is the closed [`Phase1`] set.
pub trait Clusterer<F: Scalar> {
    fn cluster(&self, ds: &Dataset<F>) -> Result<Assignment>;
}

impl<F: Scalar> Clusterer<F> for KMeansParams {
    fn cluster(&self, ds: &Dataset<F>) -> Result<Assignment> {
        kmeans(ds, self).map(|(assignment, _)| assignment)
    }
}

impl<F: Scalar> Clusterer<F> for DbscanParams {
    fn cluster(&self, ds: &Dataset<F>) -> Result<Assignment> {
        dbscan(ds, self)
    }
}

/// The selectable seeding algorithms.
#[derive(Debug, Clone, PartialEq)]
pub enum Phase1 {
    KMeans(KMeansParams),
    Dbscan(DbscanParams),
}

impl<F: Scalar> Clusterer<F> for Phase1 {
    fn cluster(&self, ds: &Dataset<F>) -> Result<Assignment> {
        match self {
            Phase1::KMeans(p) => p.cluster(ds),
            Phase1::Dbscan(p) => p.cluster(ds),
        }
    }
}

impl Phase1 {
    /// Smallest sample size the selected algorithm can seed from.
    pub fn min_sample_size(&self) -> usize {
        match self {
            Phase1::KMeans(p) => p.k,
            Phase1::Dbscan(_) => 1,
        }
    }
}
