//! Deterministic generators for structured test and benchmark matrices.
//!
//! These complement the statistical ensembles with the shapes the
//! structured algorithms care about: low density, small bandwidth, few
//! distinct columns.  Entry magnitudes stay in `[0.5, 1.5)` with random
//! signs so products neither underflow nor blow up and no generated entry
//! is accidentally zero.

use crate::matrix::Matrix;

use super::rng::{standard_normal_pair, RngStream};

/// A random magnitude in `[0.5, 1.5)` with a random sign.
pub fn signed_unit(rng: &mut RngStream) -> f64 {
    let magnitude = 0.5 + rng.uniform();
    if rng.below(2) == 0 {
        magnitude
    } else {
        -magnitude
    }
}

/// Uniformly random permutation of `0..n`.
pub fn permutation(n: usize, rng: &mut RngStream) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.below(i + 1);
        perm.swap(i, j);
    }
    perm
}

/// Real matrix of i.i.d. standard normal entries.
pub fn gaussian_real(n: usize, rng: &mut RngStream) -> Matrix {
    let vals: Vec<f64> = (0..n * n).map(|_| standard_normal_pair(rng).0).collect();
    Matrix::from_real(n, &vals).expect("normal entries are finite")
}

/// Identity plus independent off-diagonal entries, each present with
/// probability `density`.  The unit diagonal guarantees full support.
pub fn identity_plus_offdiagonal(n: usize, density: f64, rng: &mut RngStream) -> Matrix {
    let mut vals = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                vals[i * n + j] = 1.0;
            } else if rng.uniform() < density {
                vals[i * n + j] = signed_unit(rng);
            }
        }
    }
    Matrix::from_real(n, &vals).expect("entries are finite")
}

/// Fully-populated band: every entry with `|i − j| ≤ k` is non-zero.
pub fn banded_random(n: usize, k: usize, rng: &mut RngStream) -> Matrix {
    let mut vals = vec![0.0f64; n * n];
    for i in 0..n {
        for j in i.saturating_sub(k)..(i + k + 1).min(n) {
            vals[i * n + j] = signed_unit(rng);
        }
    }
    Matrix::from_real(n, &vals).expect("entries are finite")
}

/// Matrix whose rows and columns each carry at most `max_support`
/// non-zero entries, with every row and column non-empty.
///
/// A random permutation seeds one entry per row and column; each row then
/// tries up to `max_support − 1` extra placements, skipped when the row
/// or target column is already at the cap.  Support sizes therefore mix
/// values from 1 to `max_support`.
pub fn sparse_rows_matrix(n: usize, max_support: usize, rng: &mut RngStream) -> Matrix {
    assert!(max_support >= 1, "support cap must be positive");
    let perm = permutation(n, rng);
    let mut vals = vec![0.0f64; n * n];
    let mut row_count = vec![1usize; n];
    let mut col_count = vec![1usize; n];
    for (i, &j) in perm.iter().enumerate() {
        vals[i * n + j] = signed_unit(rng);
    }
    for i in 0..n {
        let extras = rng.below(max_support);
        for _ in 0..extras {
            let j = rng.below(n);
            if vals[i * n + j] == 0.0 && row_count[i] < max_support && col_count[j] < max_support
            {
                vals[i * n + j] = signed_unit(rng);
                row_count[i] += 1;
                col_count[j] += 1;
            }
        }
    }
    Matrix::from_real(n, &vals).expect("entries are finite")
}

/// Matrix with exactly `distinct` distinct columns (with probability one),
/// multiplicities as even as possible, column order shuffled.
pub fn repeated_columns_matrix(n: usize, distinct: usize, rng: &mut RngStream) -> Matrix {
    assert!(
        (1..=n).contains(&distinct),
        "distinct column count must be in 1..=n"
    );
    let columns: Vec<Vec<f64>> = (0..distinct)
        .map(|_| (0..n).map(|_| signed_unit(rng)).collect())
        .collect();
    let mut assignment: Vec<usize> = (0..n).map(|p| p % distinct).collect();
    let shuffle = permutation(n, rng);
    assignment = shuffle.iter().map(|&p| assignment[p]).collect();
    let mut vals = vec![0.0f64; n * n];
    for (p, &c) in assignment.iter().enumerate() {
        for i in 0..n {
            vals[i * n + p] = columns[c][i];
        }
    }
    Matrix::from_real(n, &vals).expect("entries are finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structured::column_multiplicities;

    fn stream(tag: u64) -> RngStream {
        RngStream::new(1234, tag)
    }

    #[test]
    fn gaussian_real_moments() {
        let mut rng = stream(0);
        let m = gaussian_real(60, &mut rng);
        let vals: Vec<f64> = m.entries().iter().map(|v| v.re).collect();
        let mean: f64 = vals.iter().sum::<f64>() / vals.len() as f64;
        let var: f64 = vals.iter().map(|v| v * v).sum::<f64>() / vals.len() as f64;
        assert!(mean.abs() < 0.05, "mean {mean}");
        assert!((var - 1.0).abs() < 0.1, "variance {var}");
    }

    #[test]
    fn identity_plus_offdiagonal_has_unit_diagonal_and_low_density() {
        let mut rng = stream(1);
        let n = 30;
        let m = identity_plus_offdiagonal(n, 0.03, &mut rng);
        for i in 0..n {
            assert_eq!(m.get(i, i).re, 1.0);
        }
        assert!(m.density() < 0.15);
        assert!(m.zero_row().is_none());
        assert!(m.zero_column().is_none());
    }

    #[test]
    fn banded_random_has_exact_bandwidth() {
        let mut rng = stream(2);
        let m = banded_random(20, 3, &mut rng);
        assert_eq!(m.band_width(), 3);
        assert_eq!(m.nnz(), (0..20).map(|i| i.min(3) + 1 + 3.min(19 - i)).sum::<usize>());
    }

    #[test]
    fn sparse_rows_matrix_obeys_caps() {
        for tag in 0..20 {
            let mut rng = stream(100 + tag);
            let n = 12;
            let d = 3;
            let m = sparse_rows_matrix(n, d, &mut rng);
            assert!(m.zero_row().is_none());
            assert!(m.zero_column().is_none());
            for i in 0..n {
                let row_nnz = m.row(i).iter().filter(|v| v.re != 0.0).count();
                assert!((1..=d).contains(&row_nnz), "row {i} has {row_nnz} entries");
                let col_nnz = (0..n).filter(|&r| m.get(r, i).re != 0.0).count();
                assert!((1..=d).contains(&col_nnz), "col {i} has {col_nnz} entries");
            }
        }
    }

    #[test]
    fn repeated_columns_matrix_groups_as_requested() {
        let mut rng = stream(3);
        let m = repeated_columns_matrix(12, 3, &mut rng);
        let cm = column_multiplicities(&m);
        assert_eq!(cm.distinct_count(), 3);
        assert_eq!(cm.counts().iter().sum::<usize>(), 12);
        for &c in cm.counts() {
            assert_eq!(c, 4);
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let a = sparse_rows_matrix(10, 3, &mut stream(9));
        let b = sparse_rows_matrix(10, 3, &mut stream(9));
        assert_eq!(a, b);
        let c = banded_random(10, 2, &mut stream(9));
        let d = banded_random(10, 2, &mut stream(9));
        assert_eq!(c, d);
    }
}
