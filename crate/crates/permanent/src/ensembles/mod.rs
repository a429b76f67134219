//! Seeded random-matrix ensembles.
//!
//! Four matrix distributions with independent, addressable samples: i.i.d.
//! standard complex Gaussian entries, i.i.d. unit-modulus entries with
//! uniform phase, i.i.d. fair ±1 entries, and scaled minors of Haar
//! unitaries.  Sample `index` of a spec is drawn from stream `index` of
//! the spec's seed, so samples can be generated in any order, in
//! parallel, with bit-identical results.

pub mod corpus;
mod qr;
pub mod rng;

pub use qr::{haar_unitary, scaled_minor};
pub use rng::{gaussian_complex, standard_normal_pair, RngStream};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, MatrixKind, Scalar};

/// The four supported matrix distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnsembleKind {
    /// I.i.d. standard complex Gaussian entries, `E|a_ij|² = 1`.
    Gaussian,
    /// I.i.d. entries `e^(iθ)` with `θ` uniform on `[0, 2π)`.
    Circular,
    /// I.i.d. fair ±1 real entries.
    Bernoulli,
    /// `√m` times the top-left block of a Haar unitary on dimension
    /// `m = round(n^a)`.
    UnitaryMinor,
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            EnsembleKind::Gaussian => "gaussian",
            EnsembleKind::Circular => "circular",
            EnsembleKind::Bernoulli => "bernoulli",
            EnsembleKind::UnitaryMinor => "unitary-minor",
        };
        write!(f, "{name}")
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(EnsembleKind::Gaussian),
            "circular" => Ok(EnsembleKind::Circular),
            "bernoulli" => Ok(EnsembleKind::Bernoulli),
            "unitary-minor" | "unitary_minor" => Ok(EnsembleKind::UnitaryMinor),
            other => Err(Error::UnknownName {
                what: "ensemble",
                value: other.to_string(),
            }),
        }
    }
}

/// A fully-specified sample distribution: kind, order, the minor exponent
/// when applicable, and the master seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    kind: EnsembleKind,
    n: usize,
    exponent: Option<f64>,
    seed: u64,
}

impl EnsembleSpec {
    /// Validates and builds a spec.  The exponent is required (and must be
    /// a finite value ≥ 1) exactly when the kind is a unitary minor.
    pub fn new(kind: EnsembleKind, n: usize, exponent: Option<f64>, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        match (kind, exponent) {
            (EnsembleKind::UnitaryMinor, None) => {
                return Err(Error::InvalidArgument(
                    "the unitary-minor ensemble requires an exponent".into(),
                ));
            }
            (EnsembleKind::UnitaryMinor, Some(a)) => {
                if !a.is_finite() || a < 1.0 {
                    return Err(Error::InvalidArgument(format!(
                        "minor exponent must be a finite value >= 1, got {a}"
                    )));
                }
            }
            (_, Some(_)) => {
                return Err(Error::InvalidArgument(
                    "only the unitary-minor ensemble takes an exponent".into(),
                ));
            }
            (_, None) => {}
        }
        Ok(EnsembleSpec {
            kind,
            n,
            exponent,
            seed,
        })
    }

    pub fn kind(&self) -> EnsembleKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn exponent(&self) -> Option<f64> {
        self.exponent
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Host dimension `m = round(n^a)` of the unitary-minor ensemble
    /// (rounding half away from zero); `None` for the i.i.d. ensembles.
    pub fn host_dimension(&self) -> Option<usize> {
        self.exponent
            .map(|a| (self.n as f64).powf(a).round() as usize)
    }
}

/// Draws sample `index` of the spec: an `n × n` matrix from stream
/// `index` of the spec's seed.  Samples are independent across indices
/// and reproducible bit-for-bit from `(seed, index)` alone.
pub fn sample_matrix(spec: &EnsembleSpec, index: u64) -> Matrix {
    let mut rng = RngStream::new(spec.seed, index);
    let n = spec.n;
    match spec.kind {
        EnsembleKind::Gaussian => {
            let entries: Vec<Scalar> = (0..n * n).map(|_| gaussian_complex(&mut rng)).collect();
            Matrix::new(MatrixKind::Complex, n, entries)
                .expect("gaussian entries are finite")
        }
        EnsembleKind::Circular => {
            let entries: Vec<Scalar> = (0..n * n)
                .map(|_| {
                    let theta = std::f64::consts::TAU * rng.uniform();
                    Scalar::new(theta.cos(), theta.sin())
                })
                .collect();
            Matrix::new(MatrixKind::Complex, n, entries)
                .expect("unit-modulus entries are finite")
        }
        EnsembleKind::Bernoulli => {
            let entries: Vec<Scalar> = (0..n * n)
                .map(|_| {
                    let sign = if rng.below(2) == 0 { 1.0 } else { -1.0 };
                    Scalar::new(sign, 0.0)
                })
                .collect();
            Matrix::new(MatrixKind::Real, n, entries).expect("±1 entries are finite")
        }
        EnsembleKind::UnitaryMinor => {
            let a = spec
                .exponent
                .expect("spec validation guarantees an exponent");
            // a >= 1 guarantees round(n^a) >= n, so the minor fits.
            scaled_minor(n, a, &mut rng).expect("validated spec yields a feasible minor")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_names_round_trip() {
        for kind in [
            EnsembleKind::Gaussian,
            EnsembleKind::Circular,
            EnsembleKind::Bernoulli,
            EnsembleKind::UnitaryMinor,
        ] {
            let name = kind.to_string();
            assert_eq!(name.parse::<EnsembleKind>().unwrap(), kind);
        }
        assert_eq!(
            "unitary_minor".parse::<EnsembleKind>().unwrap(),
            EnsembleKind::UnitaryMinor
        );
        assert!("ginibre".parse::<EnsembleKind>().is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(EnsembleSpec::new(EnsembleKind::Gaussian, 0, None, 1).is_err());
        assert!(EnsembleSpec::new(EnsembleKind::Gaussian, 4, Some(2.0), 1).is_err());
        assert!(EnsembleSpec::new(EnsembleKind::UnitaryMinor, 4, None, 1).is_err());
        assert!(EnsembleSpec::new(EnsembleKind::UnitaryMinor, 4, Some(0.5), 1).is_err());
        assert!(EnsembleSpec::new(EnsembleKind::UnitaryMinor, 4, Some(f64::NAN), 1).is_err());
        assert!(EnsembleSpec::new(EnsembleKind::UnitaryMinor, 4, Some(1.0), 1).is_ok());
        assert!(EnsembleSpec::new(EnsembleKind::Bernoulli, 4, None, 1).is_ok());
    }

    #[test]
    fn host_dimension_examples() {
        let s = EnsembleSpec::new(EnsembleKind::UnitaryMinor, 5, Some(2.0), 0).unwrap();
        assert_eq!(s.host_dimension(), Some(25));
        let s = EnsembleSpec::new(EnsembleKind::UnitaryMinor, 10, Some(2.25), 0).unwrap();
        assert_eq!(s.host_dimension(), Some(178));
        let s = EnsembleSpec::new(EnsembleKind::Gaussian, 10, None, 0).unwrap();
        assert_eq!(s.host_dimension(), None);
    }

    #[test]
    fn samples_are_reproducible_and_index_distinct() {
        for kind in [
            EnsembleKind::Gaussian,
            EnsembleKind::Circular,
            EnsembleKind::Bernoulli,
        ] {
            let spec = EnsembleSpec::new(kind, 5, None, 99).unwrap();
            let a = sample_matrix(&spec, 3);
            let b = sample_matrix(&spec, 3);
            assert_eq!(a, b, "kind {kind}");
            let c = sample_matrix(&spec, 4);
            assert_ne!(a, c, "kind {kind}");
        }
        let spec = EnsembleSpec::new(EnsembleKind::UnitaryMinor, 3, Some(1.5), 99).unwrap();
        assert_eq!(sample_matrix(&spec, 0), sample_matrix(&spec, 0));
    }

    #[test]
    fn circular_entries_have_unit_modulus() {
        let spec = EnsembleSpec::new(EnsembleKind::Circular, 12, None, 5).unwrap();
        let m = sample_matrix(&spec, 0);
        assert_eq!(m.kind(), MatrixKind::Complex);
        for v in m.entries() {
            assert!((v.norm() - 1.0).abs() <= 1e-14);
        }
    }

    #[test]
    fn bernoulli_entries_are_fair_signs() {
        let spec = EnsembleSpec::new(EnsembleKind::Bernoulli, 50, None, 8).unwrap();
        let mut sum = 0.0;
        let mut count = 0usize;
        for index in 0..40 {
            let m = sample_matrix(&spec, index);
            assert!(m.is_real());
            for v in m.entries() {
                assert!(v.re == 1.0 || v.re == -1.0);
                sum += v.re;
                count += 1;
            }
        }
        assert_eq!(count, 100_000);
        assert!((sum / count as f64).abs() < 0.02);
    }

    #[test]
    fn gaussian_one_by_one_squared_modulus_is_exponential() {
        // |per| of a 1x1 draw is |z|, and |z|^2 of a unit-variance complex
        // Gaussian is exponential with mean 1.
        // |z|^2 has unit variance, so the mean over 40_000 draws has
        // standard error 0.005; the 0.03 band is six standard errors.
        let spec = EnsembleSpec::new(EnsembleKind::Gaussian, 1, None, 4).unwrap();
        let m = 40_000;
        let mut sum = 0.0;
        for index in 0..m {
            sum += sample_matrix(&spec, index).get(0, 0).norm_sqr();
        }
        let mean = sum / m as f64;
        assert!((mean - 1.0).abs() < 0.03, "mean {mean}");
    }

    #[test]
    fn unitary_minor_sample_shape() {
        let spec = EnsembleSpec::new(EnsembleKind::UnitaryMinor, 4, Some(2.0), 13).unwrap();
        let m = sample_matrix(&spec, 1);
        assert_eq!(m.n(), 4);
        assert_eq!(m.kind(), MatrixKind::Complex);
        // Entries of √m·U are bounded by √m = 4.
        for v in m.entries() {
            assert!(v.norm() <= 4.0 + 1e-12);
        }
    }
}
