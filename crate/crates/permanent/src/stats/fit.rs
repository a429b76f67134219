//! Least-squares polynomial fits with leave-one-out error bars.
//!
//! Used for finite-size extrapolation: fitting a statistic against
//! `x = 1/n` and reading the `n → ∞` limit off the constant term.

use crate::error::{Error, Result};

/// Fitted coefficients `c₀ + c₁x + … + c_p x^p` and their spreads.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Coefficients in ascending-degree order.
    pub coefficients: Vec<f64>,
    /// Per-coefficient maximum absolute deviation across leave-one-out
    /// refits; empty when deletions were not requested.
    pub deletion_errors: Vec<f64>,
}

impl FitResult {
    /// Evaluates the fitted polynomial at `x`.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }
}

/// Solves the dense linear system `A·c = rhs` in place by Gaussian
/// elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Result<Vec<f64>> {
    let k = rhs.len();
    let scale = a
        .iter()
        .flatten()
        .fold(0.0f64, |m, &v| m.max(v.abs()))
        .max(1e-300);
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&r, &s| a[r][col].abs().partial_cmp(&a[s][col].abs()).unwrap())
            .unwrap();
        if a[pivot][col].abs() <= 1e-13 * scale {
            return Err(Error::DegenerateFit);
        }
        a.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..k {
            let factor = a[row][col] / a[col][col];
            for c in col..k {
                a[row][c] -= factor * a[col][c];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut out = vec![0.0; k];
    for col in (0..k).rev() {
        let mut v = rhs[col];
        for c in col + 1..k {
            v -= a[col][c] * out[c];
        }
        out[col] = v / a[col][col];
    }
    Ok(out)
}

/// Least-squares coefficients via the normal equations.
fn solve_normal(points: &[(f64, f64)], degree: usize) -> Result<Vec<f64>> {
    let k = degree + 1;
    // Power sums Σ x^t for t ≤ 2·degree fill the Gram matrix.
    let mut sums = vec![0.0f64; 2 * degree + 1];
    let mut rhs = vec![0.0f64; k];
    for &(x, y) in points {
        let mut p = 1.0;
        for t in 0..sums.len() {
            sums[t] += p;
            if t < k {
                rhs[t] += y * p;
            }
            p *= x;
        }
    }
    let gram: Vec<Vec<f64>> = (0..k)
        .map(|r| (0..k).map(|c| sums[r + c]).collect())
        .collect();
    solve(gram, rhs)
}

/// Fits a polynomial of the given degree to `(x, y)` points by least
/// squares.
///
/// Requires at least `degree + 2` points, so the system is always
/// overdetermined and leave-one-out refits stay solvable.  With
/// `deletions` set, each point is removed in turn and the maximum
/// absolute coefficient deviation across refits is reported as that
/// coefficient's error.
pub fn fit_polynomial(
    points: &[(f64, f64)],
    degree: usize,
    deletions: bool,
) -> Result<FitResult> {
    let k = degree + 1;
    if points.len() < degree + 2 {
        return Err(Error::Underdetermined {
            points: points.len(),
            coefficients: k,
        });
    }
    for &(x, y) in points {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "fit point ({x}, {y}) is not finite"
            )));
        }
    }
    // A polynomial of degree p is determined by p+1 distinct abscissas;
    // fewer makes the least-squares problem singular no matter how many
    // points are stacked on them.
    let mut xs: Vec<f64> = points.iter().map(|&(x, _)| x).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();
    if xs.len() < k {
        return Err(Error::DegenerateFit);
    }

    let coefficients = solve_normal(points, degree)?;
    let mut deletion_errors: Vec<f64> = Vec::new();
    if deletions {
        deletion_errors = vec![0.0; k];
        let mut held_out = Vec::with_capacity(points.len() - 1);
        for skip in 0..points.len() {
            held_out.clear();
            held_out.extend(
                points
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &p)| p),
            );
            let refit = solve_normal(&held_out, degree)?;
            for (err, (&c, &r)) in deletion_errors
                .iter_mut()
                .zip(coefficients.iter().zip(&refit))
            {
                *err = (*err).max((c - r).abs());
            }
        }
    }

    Ok(FitResult {
        coefficients,
        deletion_errors,
    })
}
