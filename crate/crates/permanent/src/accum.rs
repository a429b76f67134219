//! Floating-point accumulation strategies.
//!
//! All permanent kernels are generic over an [`Element`] (either `f64` for
//! real matrices or [`Scalar`] for complex ones) and an [`Accumulator`]
//! implementing one of three summation strategies: plain addition,
//! compensated summation, or double-double ("extended") accumulation.
//! Compensation is componentwise, so the same code serves real and complex
//! elements.
//!
//! The compensated mode is the Kahan–Babuška–Neumaier loop: the rounding
//! error of each addition is extracted exactly (branching on which operand
//! dominates) and accumulated in a separate correction term that is only
//! folded in at readout.  Unlike the classic Kahan loop, the correction is
//! never routed back through an addition that could round it away, so e.g.
//! `1e16 + 1 - 1e16` sums to exactly `1`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::matrix::Scalar;

/// Arithmetic element: `f64` or complex `Scalar`.
pub trait Element:
    Copy
    + Send
    + Sync
    + PartialEq
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    /// Embeds into the complex scalars.
    fn into_scalar(self) -> Scalar;
    /// Projects from the complex scalars (drops the imaginary part for `f64`).
    fn from_scalar(s: Scalar) -> Self;
    /// Multiplication by a real constant.
    fn scale(self, k: f64) -> Self;
    /// The rounding error of `t = fl(sum + term)`, extracted exactly via
    /// the Neumaier branch: `(sum - t) + term` when `|sum| >= |term|`,
    /// otherwise `(term - t) + sum`.  Componentwise for complex elements.
    fn addition_error(sum: Self, term: Self, t: Self) -> Self;
}

#[inline]
fn addition_error_f64(sum: f64, term: f64, t: f64) -> f64 {
    if sum.abs() >= term.abs() {
        (sum - t) + term
    } else {
        (term - t) + sum
    }
}

impl Element for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn into_scalar(self) -> Scalar {
        Scalar::new(self, 0.0)
    }
    fn from_scalar(s: Scalar) -> Self {
        s.re
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn addition_error(sum: Self, term: Self, t: Self) -> Self {
        addition_error_f64(sum, term, t)
    }
}

impl Element for Scalar {
    fn zero() -> Self {
        Scalar::new(0.0, 0.0)
    }
    fn one() -> Self {
        Scalar::new(1.0, 0.0)
    }
    fn into_scalar(self) -> Scalar {
        self
    }
    fn from_scalar(s: Scalar) -> Self {
        s
    }
    fn scale(self, k: f64) -> Self {
        Scalar::new(self.re * k, self.im * k)
    }
    fn addition_error(sum: Self, term: Self, t: Self) -> Self {
        Scalar::new(
            addition_error_f64(sum.re, term.re, t.re),
            addition_error_f64(sum.im, term.im, t.im),
        )
    }
}

/// A running sum of elements.
pub trait Accumulator<T: Element>: Send {
    fn new() -> Self;
    fn add(&mut self, term: T);
    fn value(&self) -> T;
}

/// Ordinary floating-point addition.
#[derive(Debug, Clone, Copy)]
pub struct PlainSum<T> {
    sum: T,
}

impl<T: Element> Accumulator<T> for PlainSum<T> {
    fn new() -> Self {
        PlainSum { sum: T::zero() }
    }

    #[inline]
    fn add(&mut self, term: T) {
        self.sum = self.sum + term;
    }

    fn value(&self) -> T {
        self.sum
    }
}

/// Compensated (Kahan–Babuška–Neumaier) summation.  Each addition's exact
/// rounding error is captured in a correction term that is folded into the
/// result only at readout, so corrections can never be rounded away by the
/// running sum.
#[derive(Debug, Clone, Copy)]
pub struct KahanSum<T> {
    sum: T,
    correction: T,
}

impl<T: Element> Accumulator<T> for KahanSum<T> {
    fn new() -> Self {
        KahanSum {
            sum: T::zero(),
            correction: T::zero(),
        }
    }

    #[inline]
    fn add(&mut self, term: T) {
        let t = self.sum + term;
        self.correction = self.correction + T::addition_error(self.sum, term, t);
        self.sum = t;
    }

    fn value(&self) -> T {
        self.sum + self.correction
    }
}

/// Error-free transformation: `a + b = s + e` exactly, with `s = fl(a + b)`.
#[inline]
fn two_sum<T: Element>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Like `two_sum` but assumes `|a| >= |b|` componentwise; used only to
/// renormalize an already-ordered pair.
#[inline]
fn quick_two_sum<T: Element>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Double-double accumulation: the running sum is an unevaluated pair
/// `hi + lo` carrying roughly 106 bits of significand.
#[derive(Debug, Clone, Copy)]
pub struct ExtendedSum<T> {
    hi: T,
    lo: T,
}

impl<T: Element> Accumulator<T> for ExtendedSum<T> {
    fn new() -> Self {
        ExtendedSum {
            hi: T::zero(),
            lo: T::zero(),
        }
    }

    #[inline]
    fn add(&mut self, term: T) {
        let (s, e) = two_sum(self.hi, term);
        let lo = self.lo + e;
        let (hi, lo) = quick_two_sum(s, lo);
        self.hi = hi;
        self.lo = lo;
    }

    fn value(&self) -> T {
        self.hi + self.lo
    }
}

/// Kahan-sums a slice of scalars, compensating real and imaginary parts
/// independently.
pub fn kahan_sum(terms: &[Scalar]) -> Scalar {
    let mut acc = KahanSum::<Scalar>::new();
    for &t in terms {
        acc.add(t);
    }
    acc.value()
}
