//! Permanents of band-limited matrices in time linear in the order.
//!
//! Expand `Π_i (Σ_j a_{i,j} x_j)` with the rule `x_j² = 0`: the surviving
//! monomials select one column per row without repeats, so substituting
//! every `x_j = 1` at the end yields the permanent.  When `a_{i,j} = 0`
//! for `|i − j| > k`, only a sliding window of variables is ever live:
//! after multiplying row `i`, variable `x_{i−k−1}` can no longer appear in
//! later rows and is eliminated immediately by substituting 1.  The live
//! window never exceeds `2k + 2` variables, so each row costs
//! `O(k · 2^(2k+2))` and the whole run is linear in `n` for fixed `k`.

use std::time::Instant;

use crate::dense::{Algorithm, PermanentResult};
use crate::error::{Error, Result};
use crate::matrix::{AccumulationMode, Matrix, Scalar};

/// Most live variables a [`BandPoly`] may hold: the coefficient table has
/// one entry per subset, and 2^25 entries (512 MiB of scalars would be the
/// next step) is the supported ceiling.
pub const MAX_BAND_WINDOW_BITS: usize = 25;

/// A multilinear polynomial over a contiguous window of variables.
///
/// Bit `b` of a table index stands for variable `window_offset + b`; the
/// table entry is that monomial's coefficient.  Multilinearity is enforced
/// structurally — a bitmask cannot hold a squared variable.
#[derive(Debug, Clone)]
pub struct BandPoly {
    window_offset: usize,
    coeffs: Vec<Scalar>,
}

impl BandPoly {
    /// The constant polynomial 1 with no live variables.
    pub fn constant_one() -> Self {
        BandPoly {
            window_offset: 0,
            coeffs: vec![Scalar::new(1.0, 0.0)],
        }
    }

    /// Lowest live variable index.
    pub fn window_offset(&self) -> usize {
        self.window_offset
    }

    /// Number of live variables.
    pub fn live_count(&self) -> usize {
        self.coeffs.len().trailing_zeros() as usize
    }

    /// Coefficient of the monomial selected by `mask` (bit `b` ⇔ variable
    /// `window_offset + b`).
    pub fn coefficient(&self, mask: u64) -> Scalar {
        self.coeffs[mask as usize]
    }

    fn extend_to(&mut self, var: usize) -> Result<()> {
        while self.window_offset + self.live_count() <= var {
            if self.live_count() + 1 > MAX_BAND_WINDOW_BITS {
                return Err(Error::BandWindowTooWide {
                    width: self.live_count() + 1,
                    max: MAX_BAND_WINDOW_BITS,
                });
            }
            let len = self.coeffs.len();
            self.coeffs.resize(len * 2, Scalar::new(0.0, 0.0));
        }
        Ok(())
    }

    /// Replaces the polynomial with its product by the linear form
    /// `Σ coeff · x_var`, dropping any term where a variable would square.
    /// Variables at or above the window grow the window on demand; a term
    /// naming a variable below `window_offset` is a caller error.
    ///
    /// Returns the number of coefficient accumulations performed.
    pub fn multiply_linear_form(&mut self, terms: &[(usize, Scalar)]) -> Result<u64> {
        for &(var, _) in terms {
            assert!(
                var >= self.window_offset,
                "variable {var} was already eliminated (window starts at {})",
                self.window_offset
            );
            self.extend_to(var)?;
        }
        let mut next = vec![Scalar::new(0.0, 0.0); self.coeffs.len()];
        let mut ops = 0u64;
        for (mask, &c) in self.coeffs.iter().enumerate() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            for &(var, a) in terms {
                let bit = 1usize << (var - self.window_offset);
                if mask & bit == 0 {
                    next[mask | bit] += a * c;
                    ops += 1;
                }
            }
        }
        self.coeffs = next;
        Ok(ops)
    }

    /// Eliminates the lowest live variable by substituting 1: folds each
    /// pair of coefficients that differ only in that variable and advances
    /// the window.  No-op on a constant polynomial.
    pub fn retire_lowest(&mut self) {
        if self.coeffs.len() == 1 {
            return;
        }
        let half = self.coeffs.len() / 2;
        let mut next = vec![Scalar::new(0.0, 0.0); half];
        for (m, slot) in next.iter_mut().enumerate() {
            *slot = self.coeffs[2 * m] + self.coeffs[2 * m + 1];
        }
        self.coeffs = next;
        self.window_offset += 1;
    }

    /// Substitutes 1 for every remaining variable: the sum of all
    /// coefficients, taken in table order.
    pub fn substitute_ones(&self) -> Scalar {
        let mut total = Scalar::new(0.0, 0.0);
        for &c in &self.coeffs {
            total += c;
        }
        total
    }
}

/// Permanent of a matrix promised to have bandwidth at most `k`.
///
/// Multiplies the row linear forms into a [`BandPoly`] in row order,
/// eliminating variable `i − k − 1` right after row `i`, and finally
/// substitutes 1 for the surviving variables.  All arithmetic happens on
/// polynomial coefficients with plain accumulation, so the reported mode
/// is always [`AccumulationMode::Plain`]; `terms_evaluated` counts
/// coefficient accumulations.  The call is rejected if any entry violates
/// the promised bandwidth or if the window `min(2k + 2, n)` would exceed
/// [`MAX_BAND_WINDOW_BITS`].
pub fn band_permanent(a: &Matrix, k: usize) -> Result<PermanentResult> {
    let started = Instant::now();
    let n = a.n();
    if a.band_width() > k {
        // Locate one offending entry for the report; the happy path never
        // pays for this scan.
        for i in 0..n {
            for j in 0..n {
                let v = a.get(i, j);
                if i.abs_diff(j) > k && (v.re != 0.0 || v.im != 0.0) {
                    return Err(Error::BandwidthViolation {
                        row: i,
                        col: j,
                        bandwidth: k,
                    });
                }
            }
        }
    }
    let width = (2 * k + 2).min(n);
    if width > MAX_BAND_WINDOW_BITS {
        return Err(Error::BandWindowTooWide {
            width,
            max: MAX_BAND_WINDOW_BITS,
        });
    }

    let mut p = BandPoly::constant_one();
    let mut ops = 0u64;
    let mut terms: Vec<(usize, Scalar)> = Vec::with_capacity(2 * k + 1);
    for i in 0..n {
        terms.clear();
        for j in i.saturating_sub(k)..=(i + k).min(n - 1) {
            let v = a.get(i, j);
            if v.re != 0.0 || v.im != 0.0 {
                terms.push((j, v));
            }
        }
        ops += p.multiply_linear_form(&terms)?;
        if i >= k + 1 && i - k - 1 >= p.window_offset() {
            p.retire_lowest();
        }
        debug_assert!(p.live_count() <= width);
    }
    Ok(PermanentResult {
        value: p.substitute_ones(),
        algorithm: Algorithm::Band,
        mode: AccumulationMode::Plain,
        terms_evaluated: ops,
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{naive_permanent, permanent};

    fn tridiagonal(n: usize) -> Matrix {
        let mut vals = vec![0.0; n * n];
        for i in 0..n {
            for j in i.saturating_sub(1)..(i + 2).min(n) {
                vals[i * n + j] = 1.0 + ((i * 3 + j * 5) % 7) as f64 / 4.0;
            }
        }
        Matrix::from_real(n, &vals).unwrap()
    }

    #[test]
    fn diagonal_with_zero_width() {
        let n = 9;
        let mut vals = vec![0.0; n * n];
        for i in 0..n {
            vals[i * n + i] = 1.0 + (i as f64) / 2.0;
        }
        let m = Matrix::from_real(n, &vals).unwrap();
        assert_eq!(m.band_width(), 0);
        let r = band_permanent(&m, 0).unwrap();
        let want: f64 = (0..n).map(|i| 1.0 + (i as f64) / 2.0).product();
        assert!((r.value.re - want).abs() <= 1e-12 * want.abs());
        assert_eq!(r.algorithm, Algorithm::Band);
        assert_eq!(r.mode, AccumulationMode::Plain);
        assert!(r.terms_evaluated >= n as u64);
    }

    #[test]
    fn tridiagonal_matches_dense() {
        let m = tridiagonal(12);
        assert_eq!(m.band_width(), 1);
        let want = permanent(&m, 1, AccumulationMode::Compensated).unwrap().value;
        let got = band_permanent(&m, 1).unwrap();
        assert!(
            (got.value - want).norm() <= 1e-10 * want.norm(),
            "{} vs {want}",
            got.value
        );
    }

    #[test]
    fn all_ones_with_full_width_is_factorial() {
        for n in 1..=8usize {
            let j = Matrix::all_ones(n).unwrap();
            let r = band_permanent(&j, n - 1).unwrap();
            let want: f64 = (1..=n).map(|v| v as f64).product();
            assert!(
                (r.value.re - want).abs() <= 1e-10 * want,
                "n={n}: {} vs {want}",
                r.value.re
            );
            assert_eq!(r.value.im, 0.0);
        }
    }

    #[test]
    fn wider_promise_than_needed_is_fine() {
        let m = tridiagonal(10);
        let narrow = band_permanent(&m, 1).unwrap();
        let wide = band_permanent(&m, 3).unwrap();
        assert!((narrow.value - wide.value).norm() <= 1e-12 * narrow.value.norm());
    }

    #[test]
    fn bandwidth_violation_is_reported() {
        let m = tridiagonal(6);
        match band_permanent(&m, 0) {
            Err(Error::BandwidthViolation { row, col, bandwidth }) => {
                assert_eq!(bandwidth, 0);
                assert_eq!(row.abs_diff(col), 1);
            }
            other => panic!("expected a bandwidth violation, got {other:?}"),
        }
    }

    #[test]
    fn oversized_window_is_rejected() {
        let n = 40;
        let mut vals = vec![0.0; n * n];
        for i in 0..n {
            vals[i * n + i] = 1.0;
        }
        let m = Matrix::from_real(n, &vals).unwrap();
        // k = 12 demands a 26-variable window even though the matrix is
        // diagonal: the promise, not the content, sizes the table.
        assert!(matches!(
            band_permanent(&m, 12),
            Err(Error::BandWindowTooWide { width: 26, max: 25 })
        ));
        assert!(band_permanent(&m, 11).is_ok());
    }

    #[test]
    fn complex_band_matches_naive() {
        let n = 7;
        let mut vals = vec![Scalar::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in i.saturating_sub(2)..(i + 3).min(n) {
                vals[i * n + j] =
                    Scalar::new(1.0 + (i as f64) / 3.0, ((j % 3) as f64 - 1.0) / 2.0);
            }
        }
        let m = Matrix::new(crate::matrix::MatrixKind::Complex, n, vals).unwrap();
        assert_eq!(m.band_width(), 2);
        let want = naive_permanent(&m).unwrap();
        let got = band_permanent(&m, 2).unwrap();
        assert!((got.value - want).norm() <= 1e-10 * want.norm());
    }

    #[test]
    fn window_never_exceeds_limit() {
        // Drive the polynomial by hand through the banded schedule and
        // watch the live-variable count.
        for (n, k) in [(30usize, 1usize), (40, 2), (24, 3)] {
            let mut vals = vec![0.0; n * n];
            for i in 0..n {
                for j in i.saturating_sub(k)..(i + k + 1).min(n) {
                    vals[i * n + j] = 1.0 + ((i + 2 * j) % 5) as f64;
                }
            }
            let m = Matrix::from_real(n, &vals).unwrap();
            let mut p = BandPoly::constant_one();
            let mut peak = 0usize;
            for i in 0..n {
                let terms: Vec<(usize, Scalar)> = (i.saturating_sub(k)..=(i + k).min(n - 1))
                    .map(|j| (j, m.get(i, j)))
                    .filter(|&(_, v)| v.re != 0.0 || v.im != 0.0)
                    .collect();
                p.multiply_linear_form(&terms).unwrap();
                peak = peak.max(p.live_count());
                if i >= k + 1 && i - k - 1 >= p.window_offset() {
                    p.retire_lowest();
                }
                peak = peak.max(p.live_count());
            }
            assert!(
                peak <= 2 * k + 2,
                "n={n} k={k}: window peaked at {peak} live variables"
            );
            let got = p.substitute_ones();
            let want = band_permanent(&m, k).unwrap().value;
            assert_eq!(got, want, "hand-driven run must match band_permanent");
        }
    }

    #[test]
    fn runtime_grows_linearly_in_order() {
        // Doubling the order should roughly double the work, not square
        // it; compare operation counts, which are deterministic.
        let small = band_permanent(&tridiagonal(100), 1).unwrap();
        let large = band_permanent(&tridiagonal(200), 1).unwrap();
        assert!(large.terms_evaluated <= 3 * small.terms_evaluated);
        assert!(large.terms_evaluated >= small.terms_evaluated);
    }
}
