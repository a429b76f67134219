//! Fast permanents for structured matrices, plus automatic algorithm
//! selection.
//!
//! Three structure classes get their own evaluation paths:
//!
//! * **repeated columns** — grouping equal columns shrinks the subset sum
//!   to a sum over multiplicity vectors ([`repeated`]);
//! * **sparse support** — a disjoint family of row supports restricts the
//!   inclusion–exclusion sum to subsets that meet every restricting set
//!   ([`sparse`]);
//! * **small bandwidth** — multiplying row linear forms into a windowed
//!   multilinear polynomial gives runtime linear in the order ([`band`]).

mod band;
mod repeated;
mod sparse;

pub use band::{band_permanent, BandPoly, MAX_BAND_WINDOW_BITS};
pub use repeated::{column_multiplicities, repeated_columns_permanent, ColumnMultiplicity};
pub use sparse::{greedy_partition, sparse_permanent, GreedyPartition};

use std::time::Instant;

use crate::dense::{naive_permanent, permanent, Algorithm, PermanentResult};
use crate::ensembles::rng::RngStream;
use crate::error::Result;
use crate::matrix::{AccumulationMode, Matrix, Scalar};

/// Number of randomized greedy-partition attempts used when none is
/// specified.
pub const DEFAULT_GREEDY_TRIALS: usize = 8;

/// Smallest power-of-two exponent covering `n`: `⌈log2 n⌉`.
fn ceil_log2(n: usize) -> usize {
    n.next_power_of_two().trailing_zeros() as usize
}

/// Picks an algorithm from the matrix's structure.
///
/// In order of preference: the banded path when the bandwidth is at most
/// `⌈log2 n⌉` (and the coefficient window fits), the repeated-columns path
/// when at most a quarter of the columns are distinct, the sparse path when
/// the non-zero density is at most 5%, and otherwise the dense Gray-code
/// expansion.
pub fn select_algorithm(a: &Matrix) -> Algorithm {
    let n = a.n();
    let k = a.band_width();
    if k <= ceil_log2(n) && (2 * k + 2).min(n) <= MAX_BAND_WINDOW_BITS {
        return Algorithm::Band;
    }
    let distinct = column_multiplicities(a).distinct_count();
    if 4 * distinct <= n {
        return Algorithm::Repeated;
    }
    if 20 * a.nnz() <= n * n {
        return Algorithm::Sparse;
    }
    Algorithm::Ryser
}

/// Computes the permanent with [`select_algorithm`]'s choice.
///
/// `workers` is the logical chunk count for the dense path; `seed` drives
/// the randomized tie-breaking of the greedy partition on the sparse path,
/// so a fixed seed gives a fully deterministic run.  A matrix routed to the
/// sparse path with an all-zero row or column short-circuits to exactly 0.
pub fn compute_auto(
    a: &Matrix,
    workers: u64,
    mode: AccumulationMode,
    seed: u64,
) -> Result<PermanentResult> {
    compute_with(a, select_algorithm(a), workers, mode, seed, None)
}

/// Computes the permanent with an explicitly requested algorithm.
///
/// `band_width` overrides the measured bandwidth on the banded path (a
/// wider promise is fine, a narrower one is a reported violation); the
/// other parameters are as in [`compute_auto`].
pub fn compute_with(
    a: &Matrix,
    algorithm: Algorithm,
    workers: u64,
    mode: AccumulationMode,
    seed: u64,
    band_width: Option<usize>,
) -> Result<PermanentResult> {
    match algorithm {
        Algorithm::Naive => {
            let started = Instant::now();
            let value = naive_permanent(a)?;
            let mut terms = 1u64;
            for k in 2..=a.n() as u64 {
                terms = terms.saturating_mul(k);
            }
            Ok(PermanentResult {
                value,
                algorithm: Algorithm::Naive,
                mode: AccumulationMode::Plain,
                terms_evaluated: terms,
                wall_seconds: started.elapsed().as_secs_f64(),
            })
        }
        Algorithm::Ryser => permanent(a, workers, mode),
        Algorithm::Repeated => repeated_result(a, mode),
        Algorithm::Sparse => sparse_result(a, mode, seed),
        Algorithm::Band => band_permanent(a, band_width.unwrap_or_else(|| a.band_width())),
    }
}

/// Repeated-columns path with the grouping and bookkeeping attached.
fn repeated_result(a: &Matrix, mode: AccumulationMode) -> Result<PermanentResult> {
    let started = Instant::now();
    let cm = column_multiplicities(a);
    let value = repeated_columns_permanent(&cm, mode)?;
    Ok(PermanentResult {
        value,
        algorithm: Algorithm::Repeated,
        mode,
        terms_evaluated: u64::try_from(cm.term_count()).unwrap_or(u64::MAX),
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Sparse path: greedy partition under a seeded stream, with the
/// all-zero-row/column short-circuit to an exact zero.
fn sparse_result(a: &Matrix, mode: AccumulationMode, seed: u64) -> Result<PermanentResult> {
    let started = Instant::now();
    if a.zero_row().is_some() || a.zero_column().is_some() {
        return Ok(PermanentResult {
            value: Scalar::new(0.0, 0.0),
            algorithm: Algorithm::Sparse,
            mode,
            terms_evaluated: 0,
            wall_seconds: started.elapsed().as_secs_f64(),
        });
    }
    let mut rng = RngStream::new(seed, 0);
    let partition = greedy_partition(a, DEFAULT_GREEDY_TRIALS, &mut rng)?;
    sparse_permanent(a, &partition, mode)
}
