//! Empirical CDF and density on a geometric grid.
//!
//! Permanent magnitudes spread over many orders of magnitude, so the
//! distribution is tabulated on a logarithmic grid: points `10^(j/d)`
//! for integer `j` at `d` points per decade, anchored so every power of
//! ten is a grid point.  The density comes from difference quotients of
//! the CDF, with binomial error bars propagated through.

use crate::error::{Error, Result};

use super::sample::SampleSet;

/// Grid density used when the caller has no preference.
pub const DEFAULT_PER_DECADE: usize = 16;

/// CDF and density estimates with per-point error bars.
///
/// All five vectors have the same length, indexed by grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    grid: Vec<f64>,
    cdf: Vec<f64>,
    cdf_err: Vec<f64>,
    density: Vec<f64>,
    density_err: Vec<f64>,
}

impl EmpiricalDistribution {
    /// The grid abscissas, strictly increasing.
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// `F(x) = P[X ≤ x]` at each grid point; non-decreasing, ends at 1.
    pub fn cdf(&self) -> &[f64] {
        &self.cdf
    }

    /// Binomial error `√(F(1−F))/√m` at each grid point.
    pub fn cdf_err(&self) -> &[f64] {
        &self.cdf_err
    }

    /// Density from CDF difference quotients (central in the interior,
    /// one-sided at the ends).
    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// Error of each difference quotient, from the CDF errors at the
    /// two stencil points.
    pub fn density_err(&self) -> &[f64] {
        &self.density_err
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    /// Whether the distribution has no grid points (never, in practice).
    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }
}

/// The grid abscissa `10^(j/per_decade)`.
fn grid_point(j: i64, per_decade: usize) -> f64 {
    10f64.powf(j as f64 / per_decade as f64)
}

/// Tabulates the empirical CDF and density of a sample set on a
/// geometric grid with `per_decade` points per decade.
///
/// The grid spans from the smallest positive sample to the largest
/// sample; zeros still count in `F`, they just sit below the grid.
pub fn empirical_distribution(
    s: &SampleSet,
    per_decade: usize,
) -> Result<EmpiricalDistribution> {
    if per_decade < 4 {
        return Err(Error::InvalidArgument(format!(
            "grid density must be at least 4 points per decade, got {per_decade}"
        )));
    }
    let m = s.count();
    if m == 0 {
        return Err(Error::EmptySampleSet);
    }
    let mut sorted = s.values().to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let min_positive = *sorted
        .iter()
        .find(|&&v| v > 0.0)
        .ok_or(Error::AllSamplesZero)?;
    let max = *sorted.last().unwrap();

    // Anchor the grid to powers of ten and widen by one step wherever
    // rounding in powf left an endpoint strictly inside the data range.
    let d = per_decade as f64;
    let mut j_lo = (d * min_positive.log10()).floor() as i64;
    while grid_point(j_lo, per_decade) > min_positive {
        j_lo -= 1;
    }
    let mut j_hi = (d * max.log10()).ceil() as i64;
    while grid_point(j_hi, per_decade) < max {
        j_hi += 1;
    }
    if j_hi == j_lo {
        // All positive samples sit on a single grid point; widen so the
        // difference quotients below have two abscissas to work with.
        j_hi += 1;
    }

    let grid: Vec<f64> = (j_lo..=j_hi).map(|j| grid_point(j, per_decade)).collect();
    let cdf: Vec<f64> = grid
        .iter()
        .map(|&x| sorted.partition_point(|&v| v <= x) as f64 / m as f64)
        .collect();
    let cdf_err: Vec<f64> = cdf
        .iter()
        .map(|&f| (f * (1.0 - f)).sqrt() / (m as f64).sqrt())
        .collect();

    let k = grid.len();
    let mut density = Vec::with_capacity(k);
    let mut density_err = Vec::with_capacity(k);
    for i in 0..k {
        let lo = if i == 0 { 0 } else { i - 1 };
        let hi = if i == k - 1 { k - 1 } else { i + 1 };
        let run = grid[hi] - grid[lo];
        density.push((cdf[hi] - cdf[lo]) / run);
        density_err.push((cdf_err[hi].hypot(cdf_err[lo])) / run);
    }

    Ok(EmpiricalDistribution {
        grid,
        cdf,
        cdf_err,
        density,
        density_err,
    })
}
