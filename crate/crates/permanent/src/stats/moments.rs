//! Sample moments `⟨X^k⟩` with bootstrap error bars.

use crate::accum::{Accumulator, KahanSum};
use crate::ensembles::RngStream;
use crate::error::{Error, Result};

use super::sample::SampleSet;

/// Bootstrap resample count used when the caller has no preference.
pub const DEFAULT_BOOTSTRAP_RESAMPLES: usize = 200;

/// One estimated moment: its order, value, and bootstrap error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate {
    pub order: usize,
    pub value: f64,
    pub bootstrap_err: f64,
}

/// Compensated mean of a slice.
fn mean(values: &[f64]) -> f64 {
    let mut acc = KahanSum::<f64>::new();
    for &v in values {
        acc.add(v);
    }
    acc.value() / values.len() as f64
}

/// Estimates `⟨X^k⟩` and its error from `resamples` bootstrap
/// resamples drawn with replacement.
///
/// Each resample uses its own derived random stream, so the estimate is
/// deterministic in (`rng` seed/stream, `resamples`) and independent of
/// evaluation order.
pub fn moment(
    s: &SampleSet,
    k: usize,
    resamples: usize,
    rng: &RngStream,
) -> Result<MomentEstimate> {
    if k < 1 {
        return Err(Error::InvalidArgument(
            "moment order must be at least 1".to_string(),
        ));
    }
    if resamples < 100 {
        return Err(Error::InvalidArgument(format!(
            "bootstrap needs at least 100 resamples, got {resamples}"
        )));
    }
    let m = s.count();
    if m == 0 {
        return Err(Error::EmptySampleSet);
    }

    let powers: Vec<f64> = s.values().iter().map(|x| x.powi(k as i32)).collect();
    let value = mean(&powers);

    let estimates: Vec<f64> = (0..resamples)
        .map(|b| {
            let mut draw = rng.substream(b as u64);
            let mut acc = KahanSum::<f64>::new();
            for _ in 0..m {
                acc.add(powers[draw.below(m)]);
            }
            acc.value() / m as f64
        })
        .collect();
    let center = mean(&estimates);
    let variance = estimates
        .iter()
        .map(|e| (e - center) * (e - center))
        .sum::<f64>()
        / (resamples - 1) as f64;

    Ok(MomentEstimate {
        order: k,
        value,
        bootstrap_err: variance.sqrt(),
    })
}
