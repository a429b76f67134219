//! Permanents of sparse matrices via restricted subset enumeration.
//!
//! The full inclusion–exclusion sum runs over all column subsets `J`.  If
//! `S` is the support of some row, any `J` disjoint from `S` contributes
//! zero — that row's sum over `J` vanishes.  Given pairwise-disjoint row
//! supports `S_1..S_d` covering part of the columns (remainder `T`), it is
//! therefore enough to enumerate `J = J_1 ∪ … ∪ J_d ∪ J_T` with each
//! `J_ℓ ⊆ S_ℓ` nonempty and `J_T ⊆ T` arbitrary:
//! `2^|T| · Π (2^|S_ℓ| − 1)` terms instead of `2^n`.
//!
//! The partition is found greedily: repeatedly take the support of a
//! remaining row with the fewest support-sharing neighbours (ties broken
//! by a seeded stream) and discard every row whose support intersects it.

use std::time::Instant;

use crate::accum::{Accumulator, Element, ExtendedSum, KahanSum, PlainSum};
use crate::dense::{
    combine_partials, distribute, next_gray, weight_product, Algorithm, GrayState,
    PermanentResult, MAX_DENSE_ORDER,
};
use crate::ensembles::rng::RngStream;
use crate::error::{Error, Result};
use crate::matrix::{AccumulationMode, Matrix, Scalar};
use crate::par;

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn row_support(a: &Matrix, i: usize) -> u64 {
    let mut mask = 0u64;
    for (j, v) in a.row(i).iter().enumerate() {
        if v.re != 0.0 || v.im != 0.0 {
            mask |= 1u64 << j;
        }
    }
    mask
}

/// A disjoint family of restricting column sets plus the leftover columns.
///
/// Restricting sets are row supports: any enumerated subset must meet each
/// of them, while remainder columns are free.  Sets are stored as bitmasks
/// over the column indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyPartition {
    n: usize,
    restricting_sets: Vec<u64>,
    remainder: u64,
}

impl GreedyPartition {
    /// Builds a partition from explicit bitmasks, validating shape: at
    /// least one restricting set, every set nonempty and within the first
    /// `n` bits, sets and remainder pairwise disjoint and jointly covering
    /// all `n` columns.
    pub fn new(n: usize, restricting_sets: Vec<u64>, remainder: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if n > MAX_DENSE_ORDER {
            return Err(Error::OrderTooLarge {
                n,
                max: MAX_DENSE_ORDER,
                algorithm: "sparse",
            });
        }
        if restricting_sets.is_empty() {
            return Err(Error::InvalidPartition(
                "at least one restricting set is required".into(),
            ));
        }
        let full = full_mask(n);
        let mut seen = 0u64;
        for (idx, &s) in restricting_sets.iter().enumerate() {
            if s == 0 {
                return Err(Error::InvalidPartition(format!(
                    "restricting set {idx} is empty"
                )));
            }
            if s & !full != 0 {
                return Err(Error::InvalidPartition(format!(
                    "restricting set {idx} names columns outside 0..{n}"
                )));
            }
            if s & seen != 0 {
                return Err(Error::InvalidPartition(format!(
                    "restricting set {idx} overlaps an earlier set"
                )));
            }
            seen |= s;
        }
        if remainder & !full != 0 {
            return Err(Error::InvalidPartition(format!(
                "remainder names columns outside 0..{n}"
            )));
        }
        if remainder & seen != 0 {
            return Err(Error::InvalidPartition(
                "remainder overlaps a restricting set".into(),
            ));
        }
        if seen | remainder != full {
            return Err(Error::InvalidPartition(
                "sets and remainder must cover every column".into(),
            ));
        }
        Ok(GreedyPartition {
            n,
            restricting_sets,
            remainder,
        })
    }

    /// Matrix order the partition applies to.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Restricting sets as column bitmasks.
    pub fn restricting_sets(&self) -> &[u64] {
        &self.restricting_sets
    }

    /// Columns in no restricting set, as a bitmask.
    pub fn remainder(&self) -> u64 {
        self.remainder
    }

    /// Number of subsets the restricted enumeration visits:
    /// `2^|T| · Π (2^|S_ℓ| − 1)`, saturating at `u128::MAX`.
    pub fn enumeration_count(&self) -> u128 {
        let mut count = 1u128 << self.remainder.count_ones();
        for &s in &self.restricting_sets {
            count = count.saturating_mul((1u128 << s.count_ones()) - 1);
        }
        count
    }

    /// True when `mask` meets every restricting set — the membership test
    /// for the enumerated family.
    pub fn admits(&self, mask: u64) -> bool {
        self.restricting_sets.iter().all(|&s| s & mask != 0)
    }
}

/// Greedily partitions the columns into disjoint row supports plus a
/// remainder, repeating `trials` times with randomized tie-breaking and
/// keeping the attempt with the fewest enumerated subsets.
///
/// Each attempt walks the rows by ascending neighbour count (the number of
/// other rows whose support intersects theirs), picks uniformly among ties
/// using `rng`, claims the chosen row's support as a restricting set, and
/// discards every row whose support intersects it.
///
/// Matrices with an all-zero row or column are rejected so the caller can
/// short-circuit the permanent to exactly zero.
pub fn greedy_partition(a: &Matrix, trials: usize, rng: &mut RngStream) -> Result<GreedyPartition> {
    let n = a.n();
    if n > MAX_DENSE_ORDER {
        return Err(Error::OrderTooLarge {
            n,
            max: MAX_DENSE_ORDER,
            algorithm: "sparse",
        });
    }
    if trials == 0 {
        return Err(Error::InvalidArgument(
            "greedy partition needs at least one trial".into(),
        ));
    }
    if let Some(index) = a.zero_row() {
        return Err(Error::ZeroRow { index });
    }
    if let Some(index) = a.zero_column() {
        return Err(Error::ZeroColumn { index });
    }
    let rows: Vec<u64> = (0..n).map(|i| row_support(a, i)).collect();
    // Neighbour counts are computed once on the full support graph; the
    // greedy loop always consults these static counts.
    let degree: Vec<usize> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && rows[j] & rows[i] != 0)
                .count()
        })
        .collect();

    let mut best: Option<(u128, GreedyPartition)> = None;
    for _ in 0..trials {
        let mut remaining: Vec<usize> = (0..n).collect();
        let mut sets: Vec<u64> = Vec::new();
        let mut covered = 0u64;
        while !remaining.is_empty() {
            let min_degree = remaining.iter().map(|&i| degree[i]).min().unwrap();
            let tie_count = remaining
                .iter()
                .filter(|&&i| degree[i] == min_degree)
                .count();
            let pick_pos = rng.below(tie_count);
            let pick = remaining
                .iter()
                .copied()
                .filter(|&i| degree[i] == min_degree)
                .nth(pick_pos)
                .unwrap();
            let s = rows[pick];
            sets.push(s);
            covered |= s;
            remaining.retain(|&j| rows[j] & s == 0);
        }
        let candidate = GreedyPartition {
            n,
            restricting_sets: sets,
            remainder: full_mask(n) & !covered,
        };
        let count = candidate.enumeration_count();
        let better = match &best {
            None => true,
            Some((best_count, _)) => count < *best_count,
        };
        if better {
            best = Some((count, candidate));
        }
    }
    Ok(best.expect("at least one trial ran").1)
}

/// One digit of the restricted enumeration: the subsets of one column
/// block, walked in Gray-code order.  Restricting sets skip the empty
/// subset (their walk starts at rank 1); the remainder block includes it.
struct Block {
    columns: Vec<usize>,
    first_rank: u64,
    rank_count: u64,
}

impl Block {
    fn from_mask(mask: u64, skip_empty: bool) -> Self {
        let columns: Vec<usize> = (0..64).filter(|&j| mask >> j & 1 == 1).collect();
        let total = 1u64 << columns.len();
        if skip_empty {
            Block {
                columns,
                first_rank: 1,
                rank_count: total - 1,
            }
        } else {
            Block {
                columns,
                first_rank: 0,
                rank_count: total,
            }
        }
    }
}

struct SparseKernel<T> {
    n: usize,
    cols: Vec<T>,
    blocks: Vec<Block>,
}

impl<T: Element> SparseKernel<T> {
    fn add_column(&self, w: &mut [T], j: usize) {
        let col = &self.cols[j * self.n..(j + 1) * self.n];
        for (wi, &ci) in w.iter_mut().zip(col) {
            *wi = *wi + ci;
        }
    }

    fn flip_column(&self, w: &mut [T], j: usize, present: bool) {
        let col = &self.cols[j * self.n..(j + 1) * self.n];
        if present {
            for (wi, &ci) in w.iter_mut().zip(col) {
                *wi = *wi + ci;
            }
        } else {
            for (wi, &ci) in w.iter_mut().zip(col) {
                *wi = *wi - ci;
            }
        }
    }

    /// Sums the family slice where the outer block's walk covers
    /// `chunk_len` ranks starting `chunk_start` ranks into its range.
    fn chunk_sum<A: Accumulator<T>>(&self, chunk_start: u64, chunk_len: u64) -> T {
        let mut acc = A::new();
        if chunk_len == 0 {
            return acc.value();
        }
        let outer = &self.blocks[0];
        let mut w = vec![T::zero(); self.n];
        let mut state = GrayState::at_rank(outer.first_rank + chunk_start);
        for (bit, &j) in outer.columns.iter().enumerate() {
            if state.code >> bit & 1 == 1 {
                self.add_column(&mut w, j);
            }
        }
        let mut parity = state.code.count_ones() & 1;
        for step in 0..chunk_len {
            self.descend(1, &mut w, parity, &mut acc);
            if step + 1 < chunk_len {
                let bit = next_gray(&mut state) as usize;
                self.flip_column(&mut w, outer.columns[bit], state.code >> bit & 1 == 1);
                parity ^= 1;
            }
        }
        acc.value()
    }

    fn descend<A: Accumulator<T>>(&self, level: usize, w: &mut Vec<T>, parity: u32, acc: &mut A) {
        if level == self.blocks.len() {
            let p = weight_product(w);
            if parity & 1 == 1 {
                acc.add(-p);
            } else {
                acc.add(p);
            }
            return;
        }
        let block = &self.blocks[level];
        let saved = w.clone();
        let mut state = GrayState::at_rank(block.first_rank);
        for (bit, &j) in block.columns.iter().enumerate() {
            if state.code >> bit & 1 == 1 {
                self.add_column(w, j);
            }
        }
        let mut parity = parity ^ (state.code.count_ones() & 1);
        for step in 0..block.rank_count {
            self.descend(level + 1, w, parity, acc);
            if step + 1 < block.rank_count {
                let bit = next_gray(&mut state) as usize;
                self.flip_column(w, block.columns[bit], state.code >> bit & 1 == 1);
                parity ^= 1;
            }
        }
        *w = saved;
    }
}

fn sparse_chunks<T: Element>(
    kernel: &SparseKernel<T>,
    mode: AccumulationMode,
) -> Vec<Scalar> {
    let outer_ranks = kernel.blocks[0].rank_count;
    let chunks = outer_ranks.min(64) as usize;
    par::indexed_map(chunks, |c| {
        let range = distribute(outer_ranks, chunks as u64, c as u64)
            .expect("chunk index is in range by construction");
        let partial = match mode {
            AccumulationMode::Plain => kernel.chunk_sum::<PlainSum<T>>(range.start, range.len),
            AccumulationMode::Compensated => kernel.chunk_sum::<KahanSum<T>>(range.start, range.len),
            AccumulationMode::Extended => kernel.chunk_sum::<ExtendedSum<T>>(range.start, range.len),
        };
        partial.into_scalar()
    })
}

/// Permanent via the restricted enumeration driven by `partition`.
///
/// Sums `(−1)^|J| Π_i Σ_{j∈J} a_{i,j}` over the family of column subsets
/// that meet every restricting set, then scales by `(−1)^n`.  Matrices
/// with an all-zero row or column short-circuit to exactly zero before any
/// enumeration.  Each restricting set must be the support of some row —
/// that is what makes dropping the other subsets sound.
///
/// The outer block's Gray walk is split into at most 64 fixed chunks whose
/// partial sums are combined in chunk order, so results are bit-identical
/// across thread counts and across the serial build.
pub fn sparse_permanent(
    a: &Matrix,
    partition: &GreedyPartition,
    mode: AccumulationMode,
) -> Result<PermanentResult> {
    let started = Instant::now();
    let n = a.n();
    if n > MAX_DENSE_ORDER {
        return Err(Error::OrderTooLarge {
            n,
            max: MAX_DENSE_ORDER,
            algorithm: "sparse",
        });
    }
    if partition.n != n {
        return Err(Error::InvalidPartition(format!(
            "partition is for order {} but the matrix has order {n}",
            partition.n
        )));
    }
    if a.zero_row().is_some() || a.zero_column().is_some() {
        return Ok(PermanentResult {
            value: Scalar::new(0.0, 0.0),
            algorithm: Algorithm::Sparse,
            mode,
            terms_evaluated: 0,
            wall_seconds: started.elapsed().as_secs_f64(),
        });
    }
    let supports: Vec<u64> = (0..n).map(|i| row_support(a, i)).collect();
    for (idx, &s) in partition.restricting_sets.iter().enumerate() {
        if !supports.iter().any(|&r| r == s) {
            return Err(Error::InvalidPartition(format!(
                "restricting set {idx} is not the support of any row"
            )));
        }
    }

    // Blocks ordered largest-first: the outer block is the parallel axis
    // and bigger blocks split into more chunks.
    let mut blocks: Vec<Block> = partition
        .restricting_sets
        .iter()
        .map(|&s| Block::from_mask(s, true))
        .collect();
    if partition.remainder != 0 {
        blocks.push(Block::from_mask(partition.remainder, false));
    }
    blocks.sort_by(|x, y| y.columns.len().cmp(&x.columns.len()));

    let partials: Vec<Scalar> = if a.is_real() {
        let mut cols = vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..n {
                cols[j * n + i] = a.get(i, j).re;
            }
        }
        let kernel = SparseKernel { n, cols, blocks };
        sparse_chunks(&kernel, mode)
    } else {
        let mut cols = vec![Scalar::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                cols[j * n + i] = a.get(i, j);
            }
        }
        let kernel = SparseKernel { n, cols, blocks };
        sparse_chunks(&kernel, mode)
    };
    let sum = combine_partials(&partials, mode);
    Ok(PermanentResult {
        value: sum.scale(if n % 2 == 1 { -1.0 } else { 1.0 }),
        algorithm: Algorithm::Sparse,
        mode,
        terms_evaluated: u64::try_from(partition.enumeration_count()).unwrap_or(u64::MAX),
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::permanent;

    fn stream() -> RngStream {
        RngStream::new(7, 0)
    }

    fn diagonal_plus(n: usize, extras: &[(usize, usize)]) -> Matrix {
        let mut vals = vec![0.0; n * n];
        for i in 0..n {
            vals[i * n + i] = 1.0 + (i as f64) / 4.0;
        }
        for &(i, j) in extras {
            vals[i * n + j] = -0.5 - (i + j) as f64 / 8.0;
        }
        Matrix::from_real(n, &vals).unwrap()
    }

    #[test]
    fn diagonal_partitions_into_singletons() {
        let m = diagonal_plus(6, &[]);
        let p = greedy_partition(&m, 3, &mut stream()).unwrap();
        assert_eq!(p.restricting_sets().len(), 6);
        assert_eq!(p.remainder(), 0);
        assert_eq!(p.enumeration_count(), 1);
        let r = sparse_permanent(&m, &p, AccumulationMode::Compensated).unwrap();
        let want: f64 = (0..6).map(|i| 1.0 + (i as f64) / 4.0).product();
        assert!((r.value.re - want).abs() <= 1e-12 * want);
        assert_eq!(r.terms_evaluated, 1);
    }

    #[test]
    fn all_ones_partitions_into_one_set() {
        let m = Matrix::all_ones(5).unwrap();
        let p = greedy_partition(&m, 2, &mut stream()).unwrap();
        assert_eq!(p.restricting_sets(), &[0b11111]);
        assert_eq!(p.remainder(), 0);
        assert_eq!(p.enumeration_count(), 31);
        let r = sparse_permanent(&m, &p, AccumulationMode::Compensated).unwrap();
        assert!((r.value.re - 120.0).abs() <= 1e-10 * 120.0);
        assert_eq!(r.terms_evaluated, 31);
    }

    #[test]
    fn zero_row_and_column_are_reported() {
        let mut vals = vec![1.0; 9];
        vals[3] = 0.0;
        vals[4] = 0.0;
        vals[5] = 0.0;
        let m = Matrix::from_real(3, &vals).unwrap();
        assert!(matches!(
            greedy_partition(&m, 1, &mut stream()),
            Err(Error::ZeroRow { index: 1 })
        ));
        let mut vals = vec![1.0; 9];
        vals[2] = 0.0;
        vals[5] = 0.0;
        vals[8] = 0.0;
        let m = Matrix::from_real(3, &vals).unwrap();
        assert!(matches!(
            greedy_partition(&m, 1, &mut stream()),
            Err(Error::ZeroColumn { index: 2 })
        ));
    }

    #[test]
    fn zero_row_short_circuits_enumeration() {
        // Build a valid partition for a full matrix, then evaluate a
        // matrix with a zero row: the result must be exactly 0 with no
        // terms evaluated.
        let p = GreedyPartition::new(3, vec![0b111], 0).unwrap();
        let mut vals = vec![1.0; 9];
        vals[3] = 0.0;
        vals[4] = 0.0;
        vals[5] = 0.0;
        let m = Matrix::from_real(3, &vals).unwrap();
        let r = sparse_permanent(&m, &p, AccumulationMode::Plain).unwrap();
        assert_eq!(r.value, Scalar::new(0.0, 0.0));
        assert_eq!(r.terms_evaluated, 0);
    }

    #[test]
    fn partition_shape_is_validated() {
        assert!(GreedyPartition::new(4, vec![], 0b1111).is_err());
        assert!(GreedyPartition::new(4, vec![0], 0b1111).is_err());
        assert!(GreedyPartition::new(4, vec![0b0011, 0b0110], 0b1000).is_err());
        assert!(GreedyPartition::new(4, vec![0b0011], 0b0111).is_err());
        assert!(GreedyPartition::new(4, vec![0b0011], 0b0100).is_err());
        assert!(GreedyPartition::new(4, vec![0b10011], 0b1100).is_err());
        assert!(GreedyPartition::new(4, vec![0b0011, 0b1100], 0).is_ok());
    }

    #[test]
    fn foreign_restricting_sets_are_rejected() {
        let m = diagonal_plus(4, &[(0, 1)]);
        // {2,3} as a pair is no row's support: rows are {0,1},{1},{2},{3}.
        let p = GreedyPartition::new(4, vec![0b0011, 0b1100], 0).unwrap();
        assert!(matches!(
            sparse_permanent(&m, &p, AccumulationMode::Plain),
            Err(Error::InvalidPartition(_))
        ));
        let order_mismatch = GreedyPartition::new(3, vec![0b111], 0).unwrap();
        assert!(sparse_permanent(&m, &order_mismatch, AccumulationMode::Plain).is_err());
    }

    #[test]
    fn sparse_matches_dense_on_structured_matrices() {
        let cases: Vec<Matrix> = vec![
            diagonal_plus(8, &[(0, 3), (5, 1), (7, 2)]),
            diagonal_plus(10, &[(1, 6), (2, 9), (4, 0), (8, 3)]),
            diagonal_plus(12, &[(0, 7), (3, 10), (6, 1), (9, 4), (11, 2)]),
        ];
        for m in &cases {
            let p = greedy_partition(m, 8, &mut stream()).unwrap();
            let want = permanent(m, 1, AccumulationMode::Compensated).unwrap().value;
            for mode in [
                AccumulationMode::Plain,
                AccumulationMode::Compensated,
                AccumulationMode::Extended,
            ] {
                let got = sparse_permanent(m, &p, mode).unwrap();
                assert!(
                    (got.value - want).norm() <= 1e-10 * want.norm().max(1.0),
                    "n={} mode={mode}: {} vs {want}",
                    m.n(),
                    got.value
                );
                assert_eq!(got.terms_evaluated as u128, p.enumeration_count());
            }
        }
    }

    #[test]
    fn sparse_handles_dense_support_too() {
        // Correctness does not depend on sparsity: a full matrix gets the
        // single restricting set {all columns}.
        let n = 7;
        let vals: Vec<f64> = (0..n * n)
            .map(|k| ((k * 2654435761 % 89) as f64 - 44.0) / 17.0 + 0.01)
            .collect();
        let m = Matrix::from_real(n, &vals).unwrap();
        if m.zero_row().is_some() || m.zero_column().is_some() {
            panic!("test matrix must have full support");
        }
        let p = greedy_partition(&m, 4, &mut stream()).unwrap();
        let want = permanent(&m, 1, AccumulationMode::Compensated).unwrap().value;
        let got = sparse_permanent(&m, &p, AccumulationMode::Compensated).unwrap();
        assert!((got.value - want).norm() <= 1e-10 * want.norm().max(1.0));
    }

    #[test]
    fn family_contains_every_dominating_set() {
        // Exhaustive check: every column subset hitting all row supports
        // is admitted by the partition, and the family size matches the
        // enumeration count.
        for (n, extras) in [
            (6usize, vec![(0usize, 2usize), (3, 1)]),
            (9, vec![(1, 4), (5, 0), (7, 3), (8, 6)]),
            (12, vec![(0, 5), (2, 8), (6, 11), (10, 1)]),
        ] {
            let m = diagonal_plus(n, &extras);
            let supports: Vec<u64> = (0..n).map(|i| row_support(&m, i)).collect();
            let p = greedy_partition(&m, 8, &mut stream()).unwrap();
            assert!(p.enumeration_count() <= 1u128 << n);
            let mut family = 0u128;
            for mask in 0u64..(1u64 << n) {
                let dominating = supports.iter().all(|&s| s & mask != 0);
                if dominating {
                    assert!(
                        p.admits(mask),
                        "n={n}: dominating set {mask:b} missing from the family"
                    );
                }
                if p.admits(mask) {
                    family += 1;
                }
            }
            assert_eq!(family, p.enumeration_count());
        }
    }

    #[test]
    fn fixed_seed_is_reproducible_and_chunking_is_stable() {
        let m = diagonal_plus(11, &[(0, 4), (2, 8), (6, 1), (9, 3)]);
        let p1 = greedy_partition(&m, 8, &mut RngStream::new(42, 0)).unwrap();
        let p2 = greedy_partition(&m, 8, &mut RngStream::new(42, 0)).unwrap();
        assert_eq!(p1, p2);
        let a = sparse_permanent(&m, &p1, AccumulationMode::Compensated).unwrap();
        let b = sparse_permanent(&m, &p1, AccumulationMode::Compensated).unwrap();
        assert_eq!(a.value, b.value, "identical runs must agree bit for bit");
    }

    #[test]
    fn complex_sparse_matches_dense() {
        let n = 8;
        let mut vals = vec![Scalar::new(0.0, 0.0); n * n];
        for i in 0..n {
            vals[i * n + i] = Scalar::new(1.0, (i as f64) / 3.0);
        }
        for &(i, j) in &[(0usize, 5usize), (3, 1), (6, 2)] {
            vals[i * n + j] = Scalar::new(-0.25, 0.75);
        }
        let m = Matrix::new(crate::matrix::MatrixKind::Complex, n, vals).unwrap();
        let p = greedy_partition(&m, 8, &mut stream()).unwrap();
        let want = permanent(&m, 1, AccumulationMode::Compensated).unwrap().value;
        let got = sparse_permanent(&m, &p, AccumulationMode::Compensated).unwrap();
        assert!((got.value - want).norm() <= 1e-10 * want.norm().max(1.0));
    }

    #[test]
    fn trials_must_be_positive() {
        let m = Matrix::all_ones(3).unwrap();
        assert!(greedy_partition(&m, 0, &mut stream()).is_err());
    }
}
