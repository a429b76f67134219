//! Haar-distributed unitary matrices via Householder QR.
//!
//! A matrix of i.i.d. standard complex Gaussians is QR-factored; the naive
//! Q is biased by the factorization's phase convention, so each column is
//! corrected by `λ_j = r_jj / |r_jj|`.  The corrected `U = QΛ` is the Q
//! factor of the unique QR decomposition with positive real diagonal, and
//! is Haar-distributed on the unitary group.

use crate::error::{Error, Result};
use crate::matrix::{Matrix, MatrixKind, Scalar};

use super::rng::{gaussian_complex, RngStream};

/// Packed Householder factorization of an `m × m` complex matrix:
/// reflector `j` is `I − τ_j v_j v_j†` with `v_j` supported on rows
/// `j..m`, and `diag[j]` is the resulting `r_jj`.
struct Factorization {
    m: usize,
    reflectors: Vec<Scalar>,
    taus: Vec<f64>,
    diag: Vec<Scalar>,
}

/// Factors column-major `a` (consumed as workspace).  Returns `None` if a
/// pivot column has exactly zero norm — probability zero for Gaussian
/// input; the caller regenerates.
fn householder_qr(mut a: Vec<Scalar>, m: usize) -> Option<Factorization> {
    let mut reflectors = vec![Scalar::new(0.0, 0.0); m * m];
    let mut taus = vec![0.0f64; m];
    let mut diag = vec![Scalar::new(0.0, 0.0); m];
    for j in 0..m {
        let col = j * m;
        let norm_sqr: f64 = (j..m).map(|i| a[col + i].norm_sqr()).sum();
        let norm = norm_sqr.sqrt();
        if norm == 0.0 {
            return None;
        }
        let x0 = a[col + j];
        let phase = if x0 == Scalar::new(0.0, 0.0) {
            Scalar::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let beta = -phase * norm;
        diag[j] = beta;
        // v = x − β e₁; its head is phase·(|x₀| + ‖x‖), never zero here.
        let v0 = x0 - beta;
        reflectors[col + j] = v0;
        let mut vtv = v0.norm_sqr();
        for i in j + 1..m {
            reflectors[col + i] = a[col + i];
            vtv += a[col + i].norm_sqr();
        }
        let tau = 2.0 / vtv;
        taus[j] = tau;
        for c in j + 1..m {
            let ccol = c * m;
            let mut w = Scalar::new(0.0, 0.0);
            for i in j..m {
                w += reflectors[col + i].conj() * a[ccol + i];
            }
            let tw = w * tau;
            for i in j..m {
                a[ccol + i] -= reflectors[col + i] * tw;
            }
        }
    }
    Some(Factorization {
        m,
        reflectors,
        taus,
        diag,
    })
}

impl Factorization {
    /// Column `k` of `Q = H_0 H_1 ⋯ H_{m−1}`: the reflectors applied to
    /// `e_k` from the last to the first.
    fn q_column(&self, k: usize) -> Vec<Scalar> {
        let m = self.m;
        let mut y = vec![Scalar::new(0.0, 0.0); m];
        y[k] = Scalar::new(1.0, 0.0);
        for j in (0..m).rev() {
            let col = j * m;
            let mut w = Scalar::new(0.0, 0.0);
            for i in j..m {
                w += self.reflectors[col + i].conj() * y[i];
            }
            let tw = w * self.taus[j];
            for i in j..m {
                y[i] -= self.reflectors[col + i] * tw;
            }
        }
        y
    }

    /// Phase correction for column `j`: `r_jj / |r_jj|`.
    fn lambda(&self, j: usize) -> Scalar {
        self.diag[j] / self.diag[j].norm()
    }
}

/// Draws an `m × m` standard complex Gaussian matrix in row-major draw
/// order and returns it column-major.
fn ginibre_column_major(m: usize, rng: &mut RngStream) -> Vec<Scalar> {
    let mut a = vec![Scalar::new(0.0, 0.0); m * m];
    for i in 0..m {
        for j in 0..m {
            a[j * m + i] = gaussian_complex(rng);
        }
    }
    a
}

fn haar_factorization(m: usize, rng: &mut RngStream) -> Factorization {
    loop {
        if let Some(f) = householder_qr(ginibre_column_major(m, rng), m) {
            return f;
        }
    }
}

/// A Haar-distributed `n × n` unitary matrix.
pub fn haar_unitary(n: usize, rng: &mut RngStream) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let f = haar_factorization(n, rng);
    let mut entries = vec![Scalar::new(0.0, 0.0); n * n];
    for j in 0..n {
        let q = f.q_column(j);
        let lambda = f.lambda(j);
        for i in 0..n {
            entries[i * n + j] = q[i] * lambda;
        }
    }
    Matrix::new(MatrixKind::Complex, n, entries)
}

/// The top-left `n × n` block of a Haar unitary on dimension
/// `m = round(n^a)`, scaled by `√m`.  The scaling gives entries unit
/// variance in the large-`m` limit, making the minor comparable to a
/// complex Gaussian matrix.
pub fn scaled_minor(n: usize, a: f64, rng: &mut RngStream) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let m = (n as f64).powf(a).round() as usize;
    if m < n {
        return Err(Error::MinorTooLarge { m, n });
    }
    let f = haar_factorization(m, rng);
    let scale = (m as f64).sqrt();
    let mut entries = vec![Scalar::new(0.0, 0.0); n * n];
    for j in 0..n {
        let q = f.q_column(j);
        let lambda = f.lambda(j) * scale;
        for i in 0..n {
            entries[i * n + j] = q[i] * lambda;
        }
    }
    Matrix::new(MatrixKind::Complex, n, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_deviation_from_identity(u: &Matrix) -> f64 {
        let n = u.n();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut dot = Scalar::new(0.0, 0.0);
                for k in 0..n {
                    dot += u.get(i, k) * u.get(j, k).conj();
                }
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - Scalar::new(want, 0.0)).norm());
            }
        }
        worst
    }

    /// Independent oracle: modified Gram–Schmidt with each pivot scaled to
    /// make the diagonal of R real positive.  Produces the same unique
    /// positive-diagonal Q factor the Householder + phase-fix path does.
    fn mgs_positive_q(a: &[Scalar], n: usize) -> Vec<Scalar> {
        let mut cols: Vec<Vec<Scalar>> = (0..n)
            .map(|j| (0..n).map(|i| a[j * n + i]).collect())
            .collect();
        for j in 0..n {
            for p in 0..j {
                let mut dot = Scalar::new(0.0, 0.0);
                for i in 0..n {
                    dot += cols[p][i].conj() * cols[j][i];
                }
                for i in 0..n {
                    let sub = cols[p][i] * dot;
                    cols[j][i] -= sub;
                }
            }
            let norm = cols[j].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            for v in cols[j].iter_mut() {
                *v /= norm;
            }
        }
        let mut q = vec![Scalar::new(0.0, 0.0); n * n];
        for j in 0..n {
            for i in 0..n {
                q[i * n + j] = cols[j][i];
            }
        }
        q
    }

    #[test]
    fn single_entry_has_unit_modulus() {
        let mut rng = RngStream::new(11, 0);
        let u = haar_unitary(1, &mut rng).unwrap();
        assert!((u.get(0, 0).norm() - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn columns_are_orthonormal() {
        for n in [2usize, 5, 13, 40] {
            let mut rng = RngStream::new(5, n as u64);
            let u = haar_unitary(n, &mut rng).unwrap();
            assert!(
                max_deviation_from_identity(&u) <= 1e-12,
                "n={n} deviates from unitarity"
            );
        }
    }

    #[test]
    fn householder_matches_gram_schmidt_oracle() {
        // Both construct the unique positive-diagonal Q factor of the same
        // Gaussian draw, through entirely different eliminations.
        for n in [3usize, 6, 10] {
            let mut rng = RngStream::new(17, n as u64);
            let a = ginibre_column_major(n, &mut rng);
            let f = householder_qr(a.clone(), n).unwrap();
            let oracle = mgs_positive_q(&a, n);
            for j in 0..n {
                let q = f.q_column(j);
                let lambda = f.lambda(j);
                for i in 0..n {
                    let got = q[i] * lambda;
                    let want = oracle[i * n + j];
                    assert!(
                        (got - want).norm() <= 1e-10,
                        "n={n} ({i},{j}): {got} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn diagonal_after_correction_is_real_positive() {
        let mut rng = RngStream::new(23, 0);
        let f = haar_factorization(8, &mut rng);
        for j in 0..8 {
            let corrected = f.lambda(j).conj() * f.diag[j];
            assert!(corrected.im.abs() <= 1e-14 * corrected.re.abs());
            assert!(corrected.re > 0.0);
        }
    }

    #[test]
    fn zero_column_is_rejected_for_regeneration() {
        let a = vec![Scalar::new(0.0, 0.0); 4];
        assert!(householder_qr(a, 2).is_none());
    }

    #[test]
    fn minor_dimensions_and_scaling() {
        let mut rng = RngStream::new(31, 0);
        let s = scaled_minor(5, 2.0, &mut rng).unwrap();
        assert_eq!(s.n(), 5);
        // Entries of √m·U have magnitude at most √m.
        let m = 25.0f64;
        for v in s.entries() {
            assert!(v.norm() <= m.sqrt() + 1e-12);
        }
    }

    #[test]
    fn fractional_exponent_rounds_half_away() {
        // round(10^2.25) = round(177.83) = 178: check via the minor's
        // variance scale rather than a private accessor.
        assert_eq!((10f64.powf(2.25)).round(), 178.0);
        let mut rng = RngStream::new(3, 9);
        let err = scaled_minor(4, 0.5, &mut rng);
        assert!(matches!(err, Err(Error::MinorTooLarge { m: 2, n: 4 })));
    }

    #[test]
    fn reproducible_under_fixed_stream() {
        let mut r1 = RngStream::new(77, 4);
        let mut r2 = RngStream::new(77, 4);
        let u1 = haar_unitary(6, &mut r1).unwrap();
        let u2 = haar_unitary(6, &mut r2).unwrap();
        assert_eq!(u1, u2);
    }
}
