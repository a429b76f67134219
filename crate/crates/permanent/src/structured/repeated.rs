//! Permanents of matrices with repeated columns.
//!
//! Grouping equal columns turns the subset sum of the dense expansion into
//! a sum over multiplicity vectors: choosing `f_j` of the `m_j` copies of
//! distinct column `j` contributes a binomial weight `C(m_j, f_j)` and the
//! row values `Σ_j f_j c_j[i]`.  The term count drops from `2^n` to
//! `Π (m_j + 1)`.

use crate::accum::{Accumulator, Element, ExtendedSum, KahanSum, PlainSum};
use crate::dense::{combine_partials, weight_product};
use crate::error::{Error, Result};
use crate::matrix::{AccumulationMode, Matrix, Scalar};
use crate::par;

/// The distinct columns of a matrix with their multiplicities, in order of
/// first appearance.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnMultiplicity {
    n: usize,
    columns: Vec<Vec<Scalar>>,
    counts: Vec<usize>,
}

impl ColumnMultiplicity {
    /// Builds a grouping directly.  `columns[j]` must have length `n`, all
    /// counts must be positive, their sum must equal `n`, and columns must
    /// be pairwise distinct.
    pub fn new(n: usize, columns: Vec<Vec<Scalar>>, counts: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if columns.len() != counts.len() || columns.is_empty() {
            return Err(Error::InvalidArgument(
                "columns and counts must be non-empty and of equal length".into(),
            ));
        }
        if columns.iter().any(|c| c.len() != n) {
            return Err(Error::InvalidArgument(format!(
                "every distinct column must have {n} entries"
            )));
        }
        if counts.iter().any(|&m| m == 0) {
            return Err(Error::InvalidArgument("multiplicities must be positive".into()));
        }
        if counts.iter().sum::<usize>() != n {
            return Err(Error::InvalidArgument(format!(
                "multiplicities must sum to the order {n}"
            )));
        }
        for a in 0..columns.len() {
            for b in a + 1..columns.len() {
                if columns[a] == columns[b] {
                    return Err(Error::InvalidArgument(
                        "distinct columns must be pairwise distinct".into(),
                    ));
                }
            }
        }
        Ok(ColumnMultiplicity { n, columns, counts })
    }

    /// Matrix order.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of distinct columns.
    pub fn distinct_count(&self) -> usize {
        self.columns.len()
    }

    /// The `j`-th distinct column.
    pub fn column(&self, j: usize) -> &[Scalar] {
        &self.columns[j]
    }

    /// Multiplicities, aligned with the distinct columns.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Number of terms the weighted expansion evaluates: `Π (m_j + 1)`,
    /// saturating at `u128::MAX`.
    pub fn term_count(&self) -> u128 {
        self.counts
            .iter()
            .fold(1u128, |acc, &m| acc.saturating_mul(m as u128 + 1))
    }
}

/// Groups equal columns of `a` by exact comparison, in order of first
/// appearance.
pub fn column_multiplicities(a: &Matrix) -> ColumnMultiplicity {
    let n = a.n();
    let mut columns: Vec<Vec<Scalar>> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for j in 0..n {
        let col: Vec<Scalar> = (0..n).map(|i| a.get(i, j)).collect();
        match columns.iter().position(|c| *c == col) {
            Some(idx) => counts[idx] += 1,
            None => {
                columns.push(col);
                counts.push(1);
            }
        }
    }
    ColumnMultiplicity { n, columns, counts }
}

struct RepeatedKernel<'a, T> {
    n: usize,
    columns: Vec<Vec<T>>,
    counts: &'a [usize],
}

impl<T: Element> RepeatedKernel<'_, T> {
    /// Sums every multiplicity vector whose leading digit is `first`,
    /// enumerating the remaining digits depth-first in increasing order.
    fn subtree<A: Accumulator<T>>(&self, first: usize) -> T {
        let mut w = vec![T::zero(); self.n];
        let mut weight = 1.0f64;
        for f in 1..=first {
            for (wi, ci) in w.iter_mut().zip(&self.columns[0]) {
                *wi = *wi + *ci;
            }
            weight *= (self.counts[0] - f + 1) as f64 / f as f64;
        }
        let mut acc = A::new();
        self.descend(1, &mut w, weight, first as u32 & 1, &mut acc);
        acc.value()
    }

    fn descend<A: Accumulator<T>>(
        &self,
        class: usize,
        w: &mut Vec<T>,
        weight: f64,
        parity: u32,
        acc: &mut A,
    ) {
        if class == self.columns.len() {
            let p = weight_product(w);
            let signed = if parity & 1 == 1 { -weight } else { weight };
            acc.add(p.scale(signed));
            return;
        }
        let saved = w.clone();
        let m = self.counts[class];
        let mut weight_f = weight;
        let mut parity_f = parity;
        self.descend(class + 1, w, weight_f, parity_f, acc);
        for f in 1..=m {
            for (wi, ci) in w.iter_mut().zip(&self.columns[class]) {
                *wi = *wi + *ci;
            }
            weight_f *= (m - f + 1) as f64 / f as f64;
            parity_f ^= 1;
            self.descend(class + 1, w, weight_f, parity_f, acc);
        }
        *w = saved;
    }
}

fn repeated_mode<T: Element>(kernel: &RepeatedKernel<'_, T>, first: usize, mode: AccumulationMode) -> T {
    match mode {
        AccumulationMode::Plain => kernel.subtree::<PlainSum<T>>(first),
        AccumulationMode::Compensated => kernel.subtree::<KahanSum<T>>(first),
        AccumulationMode::Extended => kernel.subtree::<ExtendedSum<T>>(first),
    }
}

/// Permanent via the multiplicity-weighted expansion.
///
/// Evaluates `(-1)^n Σ (-1)^(Σ f) (Π C(m_j, f_j)) Π_i Σ_j f_j c_j[i]` over
/// all multiplicity vectors `f`, depth-first with incremental row values.
/// The leading digit partitions the work: each of the `m_1 + 1` subtrees is
/// summed independently and the partials are combined serially in digit
/// order, mirroring the dense worker contract.
pub fn repeated_columns_permanent(cm: &ColumnMultiplicity, mode: AccumulationMode) -> Result<Scalar> {
    let n = cm.n();
    if n > crate::dense::MAX_DENSE_ORDER {
        return Err(Error::OrderTooLarge {
            n,
            max: crate::dense::MAX_DENSE_ORDER,
            algorithm: "repeated",
        });
    }
    let real_input = cm
        .columns
        .iter()
        .all(|col| col.iter().all(|v| v.im == 0.0));
    let tasks = cm.counts[0] + 1;
    let partials: Vec<Scalar> = if real_input {
        let kernel = RepeatedKernel {
            n,
            columns: cm
                .columns
                .iter()
                .map(|col| col.iter().map(|v| v.re).collect())
                .collect(),
            counts: &cm.counts,
        };
        par::indexed_map(tasks, |first| {
            repeated_mode::<f64>(&kernel, first, mode).into_scalar()
        })
    } else {
        let kernel = RepeatedKernel {
            n,
            columns: cm.columns.clone(),
            counts: &cm.counts,
        };
        par::indexed_map(tasks, |first| repeated_mode::<Scalar>(&kernel, first, mode))
    };
    let sum = combine_partials(&partials, mode);
    Ok(sum.scale(if n % 2 == 1 { -1.0 } else { 1.0 }))
}
