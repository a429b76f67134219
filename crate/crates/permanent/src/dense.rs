//! Dense exact permanents.
//!
//! The workhorse is an inclusion–exclusion sum over column subsets walked in
//! Gray-code order, restricted to the half of the subset lattice containing
//! the last column.  Each step flips a single column in or out of a running
//! row-weight vector, so a term costs `O(n)` instead of `O(n^2)`:
//!
//! * `w_i` starts at `a[i][n-1] - (row sum)/2`; flipping column `j` adds or
//!   subtracts `a[i][j]`.
//! * the term for subset rank `r` is `(-1)^(r+1) * prod_i w_i`, and the
//!   final answer is `2 * (-1)^n` times the accumulated sum.
//!
//! The `2^(n-1)` ranks are split into `workers` contiguous chunks.  Each
//! chunk is summed independently (this is [`subpermanent`]) and the rounded
//! partial sums are combined serially in chunk order, so a run with `w`
//! workers gives bit-identical results no matter how many threads execute
//! the chunks — or whether the `parallel` feature is compiled in at all.
//!
//! A brute-force expansion over permutations ([`naive_permanent`]) serves as
//! an independent cross-check for small orders.

use std::fmt;
use std::time::Instant;

use crate::accum::{Accumulator, Element, ExtendedSum, KahanSum, PlainSum};
use crate::error::{Error, Result};
use crate::matrix::{AccumulationMode, Matrix, Scalar};
use crate::par;

/// Which algorithm produced a [`PermanentResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Brute-force permutation expansion.
    Naive,
    /// Gray-code inclusion–exclusion over column subsets.
    Ryser,
    /// Multiplicity-weighted expansion for matrices with repeated columns.
    Repeated,
    /// Restricted enumeration driven by a disjoint column partition.
    Sparse,
    /// Sliding-window polynomial elimination for banded matrices.
    Band,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Algorithm::Naive => "naive",
            Algorithm::Ryser => "ryser",
            Algorithm::Repeated => "repeated",
            Algorithm::Sparse => "sparse",
            Algorithm::Band => "band",
        };
        write!(f, "{name}")
    }
}

/// A computed permanent plus bookkeeping about how it was obtained.
#[derive(Debug, Clone)]
pub struct PermanentResult {
    /// The permanent.  Real inputs produce a value with zero imaginary part.
    pub value: Scalar,
    /// Algorithm that produced the value.
    pub algorithm: Algorithm,
    /// Accumulation mode used for the term sums.  The banded algorithm does
    /// its arithmetic on polynomial coefficients and reports `Plain`.
    pub mode: AccumulationMode,
    /// Number of terms (leaf products or coefficient updates) evaluated.
    pub terms_evaluated: u64,
    /// Wall-clock seconds spent inside the call.
    pub wall_seconds: f64,
}

/// Largest order the subset-enumeration algorithms accept: subset ranks must
/// fit in a 64-bit word.
pub const MAX_DENSE_ORDER: usize = 64;

/// Largest order [`naive_permanent`] accepts.
pub const MAX_NAIVE_ORDER: usize = 10;

/// A contiguous chunk of subset ranks assigned to one worker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionRange {
    /// First rank in the chunk.
    pub start: u64,
    /// Number of ranks in the chunk.
    pub len: u64,
}

/// Splits `0..total` into `workers` contiguous chunks whose lengths differ
/// by at most one, and returns the chunk for `index`.
///
/// Chunks with smaller index are never shorter than later ones: the first
/// `total % workers` chunks get the extra rank.
pub fn distribute(total: u64, workers: u64, index: u64) -> Result<PartitionRange> {
    if workers == 0 {
        return Err(Error::InvalidArgument("worker count must be positive".into()));
    }
    if index >= workers {
        return Err(Error::InvalidArgument(format!(
            "worker index {index} out of range for {workers} workers"
        )));
    }
    let q = total / workers;
    let r = total % workers;
    let start = index * q + index.min(r);
    let len = q + u64::from(index < r);
    Ok(PartitionRange { start, len })
}

/// The Gray code word at `rank`: `rank XOR (rank >> 1)`.  Successive ranks
/// give words differing in exactly one bit.
#[inline]
pub fn gray_unrank(rank: u64) -> u64 {
    rank ^ (rank >> 1)
}

/// State of a Gray-code walk: the current code word and the sign
/// `(-1)^rank` of its position in the sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrayState {
    /// Current code word.
    pub code: u64,
    /// `+1` at even ranks, `-1` at odd ranks.
    pub sign: i8,
}

impl GrayState {
    /// The walk state at `rank`.
    pub fn at_rank(rank: u64) -> Self {
        GrayState {
            code: gray_unrank(rank),
            sign: if rank % 2 == 0 { 1 } else { -1 },
        }
    }
}

/// Advances the walk by one rank and returns the index of the flipped bit.
///
/// Moving to an odd rank always flips bit 0; moving to an even rank flips
/// the bit just above the lowest set bit of the outgoing word.  The updated
/// `sign` is the sign of the *new* rank.
#[inline]
pub fn next_gray(state: &mut GrayState) -> u32 {
    state.sign = -state.sign;
    let j = if state.sign > 0 {
        // New rank is even (old word had odd parity, hence bit 0 set).
        state.code.trailing_zeros() + 1
    } else {
        0
    };
    state.code ^= 1u64 << j;
    j
}

/// Product of all weights, evaluated as two independent half-slice chains
/// multiplied at the end.  The fixed association order keeps results
/// reproducible; the split shortens the multiply dependency chain.
#[inline]
pub(crate) fn weight_product<T: Element>(w: &[T]) -> T {
    let mid = w.len() / 2;
    let mut front = T::one();
    for &v in &w[..mid] {
        front = front * v;
    }
    let mut back = T::one();
    for &v in &w[mid..] {
        back = back * v;
    }
    front * back
}

/// Column-major copy of the entries, mapped into the element type.
fn column_major<T: Element>(a: &Matrix) -> Vec<T> {
    let n = a.n();
    let mut cols = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            cols[j * n + i] = T::from_scalar(a.get(i, j));
        }
    }
    cols
}

/// One worker's share of the Gray-code sum.  `cols` is column-major.
fn ryser_partial<T: Element, A: Accumulator<T>>(
    cols: &[T],
    n: usize,
    workers: u64,
    index: u64,
) -> T {
    let total = 1u64 << (n - 1);
    let range = distribute(total, workers, index).expect("caller validates worker arguments");
    if range.len == 0 {
        return T::zero();
    }

    // Weights for the subset at the chunk's starting rank.
    let mut w = vec![T::zero(); n];
    for i in 0..n {
        let mut row_sum = T::zero();
        for j in 0..n {
            row_sum = row_sum + cols[j * n + i];
        }
        w[i] = cols[(n - 1) * n + i] - row_sum.scale(0.5);
    }
    let mut state = GrayState::at_rank(range.start);
    for j in 0..n - 1 {
        if state.code >> j & 1 == 1 {
            let col = &cols[j * n..j * n + n];
            for (wi, &ci) in w.iter_mut().zip(col) {
                *wi = *wi + ci;
            }
        }
    }

    let mut acc = A::new();
    for _ in 0..range.len {
        let p = weight_product(&w);
        let j = next_gray(&mut state) as usize;
        if state.sign > 0 {
            acc.add(p);
        } else {
            acc.add(-p);
        }
        // The final step of the last chunk flips the top bit to leave the
        // half-lattice; the weight update is then unused but stays in
        // bounds because that bit is column n-1.
        let col = &cols[j * n..j * n + n];
        if state.code >> j & 1 == 1 {
            for (wi, &ci) in w.iter_mut().zip(col) {
                *wi = *wi + ci;
            }
        } else {
            for (wi, &ci) in w.iter_mut().zip(col) {
                *wi = *wi - ci;
            }
        }
    }
    acc.value()
}

fn ryser_partial_mode<T: Element>(
    cols: &[T],
    n: usize,
    workers: u64,
    index: u64,
    mode: AccumulationMode,
) -> T {
    match mode {
        AccumulationMode::Plain => ryser_partial::<T, PlainSum<T>>(cols, n, workers, index),
        AccumulationMode::Compensated => ryser_partial::<T, KahanSum<T>>(cols, n, workers, index),
        AccumulationMode::Extended => ryser_partial::<T, ExtendedSum<T>>(cols, n, workers, index),
    }
}

fn check_dense_args(a: &Matrix, workers: u64, index: Option<u64>) -> Result<()> {
    let n = a.n();
    if n > MAX_DENSE_ORDER {
        return Err(Error::OrderTooLarge {
            n,
            max: MAX_DENSE_ORDER,
            algorithm: "ryser",
        });
    }
    if workers == 0 {
        return Err(Error::InvalidArgument("worker count must be positive".into()));
    }
    if let Some(k) = index {
        if k >= workers {
            return Err(Error::InvalidArgument(format!(
                "worker index {k} out of range for {workers} workers"
            )));
        }
    }
    Ok(())
}

/// One worker's partial sum of the Gray-code expansion, rounded to a
/// scalar.  Summing the partials for all `workers` indices and scaling by
/// `2 * (-1)^n` reproduces [`permanent`] exactly.
pub fn subpermanent(a: &Matrix, workers: u64, index: u64, mode: AccumulationMode) -> Result<Scalar> {
    check_dense_args(a, workers, Some(index))?;
    let value = if a.is_real() {
        let cols = column_major::<f64>(a);
        ryser_partial_mode::<f64>(&cols, a.n(), workers, index, mode).into_scalar()
    } else {
        let cols = column_major::<Scalar>(a);
        ryser_partial_mode::<Scalar>(&cols, a.n(), workers, index, mode)
    };
    Ok(value)
}

/// Combines ordered worker partials with the same strategy used inside the
/// workers.
pub(crate) fn combine_partials(parts: &[Scalar], mode: AccumulationMode) -> Scalar {
    match mode {
        AccumulationMode::Plain => {
            let mut acc = PlainSum::<Scalar>::new();
            for &p in parts {
                acc.add(p);
            }
            acc.value()
        }
        AccumulationMode::Compensated => {
            let mut acc = KahanSum::<Scalar>::new();
            for &p in parts {
                acc.add(p);
            }
            acc.value()
        }
        AccumulationMode::Extended => {
            let mut acc = ExtendedSum::<Scalar>::new();
            for &p in parts {
                acc.add(p);
            }
            acc.value()
        }
    }
}

/// Exact permanent by the Gray-code expansion, split over `workers` logical
/// chunks.
///
/// The chunk partials are computed independently (in parallel when the
/// `parallel` feature is on), collected in chunk order, and combined
/// serially with the selected accumulation mode, then scaled by
/// `2 * (-1)^n`.  For a fixed `workers` the result is bit-identical across
/// thread counts and across the serial build.
pub fn permanent(a: &Matrix, workers: u64, mode: AccumulationMode) -> Result<PermanentResult> {
    check_dense_args(a, workers, None)?;
    let started = Instant::now();
    let n = a.n();
    let partials: Vec<Scalar> = if a.is_real() {
        let cols = column_major::<f64>(a);
        par::indexed_map(workers as usize, |k| {
            ryser_partial_mode::<f64>(&cols, n, workers, k as u64, mode).into_scalar()
        })
    } else {
        let cols = column_major::<Scalar>(a);
        par::indexed_map(workers as usize, |k| {
            ryser_partial_mode::<Scalar>(&cols, n, workers, k as u64, mode)
        })
    };
    let sum = combine_partials(&partials, mode);
    let sign_scale = if n % 2 == 0 { 2.0 } else { -2.0 };
    Ok(PermanentResult {
        value: sum.scale(sign_scale),
        algorithm: Algorithm::Ryser,
        mode,
        terms_evaluated: 1u64 << (n - 1),
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Brute-force permanent: sums the products of every permutation's entry
/// selection with plain accumulation, in lexicographic expansion order.
/// Exponential in `n!`; limited to `n <= 10`.
pub fn naive_permanent(a: &Matrix) -> Result<Scalar> {
    let n = a.n();
    if n > MAX_NAIVE_ORDER {
        return Err(Error::OrderTooLarge {
            n,
            max: MAX_NAIVE_ORDER,
            algorithm: "naive",
        });
    }
    fn expand(a: &Matrix, row: usize, used: u32, prefix: Scalar, sum: &mut Scalar) {
        let n = a.n();
        if row == n {
            *sum += prefix;
            return;
        }
        for j in 0..n {
            if used & (1 << j) == 0 {
                expand(a, row + 1, used | (1 << j), prefix * a.get(row, j), sum);
            }
        }
    }
    let mut sum = Scalar::new(0.0, 0.0);
    expand(a, 0, 0, Scalar::new(1.0, 0.0), &mut sum);
    Ok(sum)
}
