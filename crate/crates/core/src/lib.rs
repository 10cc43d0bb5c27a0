//! Two-phase spatial clustering with an explicit noise budget.
//!
//! The crate is organized around the Bacteria-Farm algorithm: a seeding
//! phase clusters a random sample with a standard algorithm to extract
//! per-cluster centroids and point budgets, then a growth phase accretes
//! the full dataset outward from each centroid through a bounded set of
//! "front-runner" points, leaving the budgeted remainder unassigned as
//! noise. k-means and DBSCAN are provided both as seeding algorithms and
//! as comparison baselines, together with the Silhouette and
//! Calinski-Harabasz validation metrics.
//!
//! All geometry is generic over the scalar type through [`Scalar`]
//! (`f32` or `f64`); bookkeeping arithmetic (proportions, thresholds)
//! is always carried out in `f64` so budgets do not depend on the
//! coordinate precision.

pub mod assignment;
pub mod bacteria_farm;
pub mod baselines;
pub mod dataset;
pub mod error;
pub mod metrics;
pub mod scalar;
pub mod spatial;

pub use assignment::{label_agreement, Assignment};
pub use bacteria_farm::{
    fit, grow_clusters, retrieve_parameters, sample_phase, BfConfig, FitResult, FrontRunner,
    FrontRunnerSet, GrowOutcome, GrowthMode, SeedModel,
};
pub use baselines::{
    dbscan, kmeans, tune_dbscan_eps, Clusterer, DbscanParams, KMeansParams, Phase1, TunedDbscan,
};
pub use dataset::{gen_blobs, gen_moons, load_csv, parse_csv, Dataset, Point};
pub use error::Error;
pub use metrics::{calinski_harabasz, silhouette_mean, MetricsReport};
pub use scalar::Scalar;
pub use spatial::SpatialIndex;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Double-precision aliases; the CLI and most tests work with these.
pub type Point64 = Point<f64>;
pub type Dataset64 = Dataset<f64>;

/// Single-precision aliases.
pub type Point32 = Point<f32>;
pub type Dataset32 = Dataset<f32>;
