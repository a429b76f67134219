//! Statistics over normalized permanent samples.
//!
//! The pipeline: draw matrices from an ensemble, compute exact
//! permanents, normalize to `X = |per(A)|/√n!` ([`collect_samples`]),
//! then estimate moments with bootstrap errors ([`moment`]), tabulate
//! the distribution on a geometric grid ([`empirical_distribution`]),
//! extrapolate across orders ([`fit_polynomial`]), and compare ensembles
//! with an exact two-sample Kolmogorov–Smirnov test ([`ks_test`]).
//!
//! Every operation is pure over immutable [`SampleSet`]s, and anything
//! randomized (bootstrap resampling) derives per-task random streams, so
//! results are deterministic and safe to compute concurrently.

mod distribution;
mod fit;
mod ks;
mod moments;
mod sample;

pub use distribution::{empirical_distribution, EmpiricalDistribution, DEFAULT_PER_DECADE};
pub use fit::{fit_polynomial, FitResult};
pub use ks::{ks_statistic, ks_test, ks_threshold, KsResult};
pub use moments::{moment, MomentEstimate, DEFAULT_BOOTSTRAP_RESAMPLES};
pub use sample::{
    collect_samples, normalized_samples, SampleSet, MAX_NORMALIZED_ORDER,
};
