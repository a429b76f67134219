//! Exact permanents of real and complex matrices, with the random-matrix
//! ensembles and statistics used to study their distributions.
//!
//! The crate has three layers:
//!
//! * **Kernels** ([`dense`], [`structured`]) — a Gray-code
//!   inclusion–exclusion engine for general matrices plus specialized
//!   algorithms for repeated-column, sparse, and banded structure, all with
//!   selectable accumulation precision ([`accum`]).
//! * **Ensembles** ([`ensembles`]) — seeded, stream-indexed generators for
//!   Gaussian, circular, Bernoulli, and truncated-unitary random matrices.
//! * **Statistics** ([`stats`]) — normalized permanent samples, moment and
//!   distribution estimators with bootstrap errors, polynomial fits, and a
//!   two-sample Kolmogorov–Smirnov test.
//!
//! Everything is deterministic: a fixed seed and worker count reproduce
//! results bit for bit, with or without the `parallel` feature.

pub mod accum;
pub mod dense;
pub mod ensembles;
pub mod error;
pub mod matrix;
mod par;
pub mod stats;
pub mod structured;

pub use accum::kahan_sum;
pub use dense::{
    distribute, gray_unrank, naive_permanent, next_gray, permanent, subpermanent, Algorithm,
    GrayState, PartitionRange, PermanentResult,
};
pub use ensembles::{
    gaussian_complex, haar_unitary, sample_matrix, scaled_minor, standard_normal_pair,
    EnsembleKind, EnsembleSpec, RngStream,
};
pub use error::{Error, Result};
pub use matrix::{AccumulationMode, Matrix, MatrixKind, Scalar};
pub use stats::{
    collect_samples, empirical_distribution, fit_polynomial, ks_statistic, ks_test, ks_threshold,
    moment, normalized_samples, EmpiricalDistribution, FitResult, KsResult, MomentEstimate,
    SampleSet,
};
pub use structured::{
    band_permanent, column_multiplicities, compute_auto, compute_with, greedy_partition,
    repeated_columns_permanent, select_algorithm, sparse_permanent, BandPoly, ColumnMultiplicity,
    GreedyPartition, DEFAULT_GREEDY_TRIALS, MAX_BAND_WINDOW_BITS,
};
