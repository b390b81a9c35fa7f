//! Fairness-discrepancy metrics for generative models.
//!
//! The fairness of a generator with respect to a categorical attribute is
//! measured as a discrepancy between the attribute distribution of its
//! samples, as seen through an attribute classifier, and the uniform
//! distribution. This crate provides:
//!
//! * [`attrspace`]: attribute spaces, distributions, extreme points and sweeps
//! * [`transport`]: an exact discrete optimal-transport solver
//! * [`metrics`]: L1, L2, WD, specificity and information specificity, with
//!   normalization to `[0, 1]`
//! * [`classifier`]: confusion-matrix classifier models and prediction ingestion
//! * [`bench`]: MEPE / EP-var / MEM benchmarks and report assembly

pub mod attrspace;
pub mod bench;
pub mod classifier;
pub mod error;
pub mod metrics;
pub mod transport;

pub use attrspace::{
    ab_extreme_points, sweep, sweep_from, Attribute, AttributeSpace, CategoricalDistribution,
};
pub use bench::{BenchmarkReport, ExperimentConfig, ScoreKind, ScoreSet, SweepStarts};
pub use classifier::{ConfusionModel, EstimationMode, PredictionRecord};
pub use error::{Error, Result};
pub use metrics::{fd_score, n_factor, FairnessScore, MetricId, MetricParams, Scorer};
pub use transport::{CostMatrix, TransportPlan};
