//! Two-sample Kolmogorov–Smirnov comparison.

use crate::error::{Error, Result};

use super::sample::SampleSet;

/// Outcome of a two-sample Kolmogorov–Smirnov test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    /// Largest distance between the two empirical CDFs.
    pub statistic: f64,
    /// Critical distance at the requested significance.
    pub threshold: f64,
    /// Significance level the threshold was computed for.
    pub alpha: f64,
    /// Whether the statistic exceeds the threshold.
    pub reject: bool,
}

/// Exact sup-distance `D = sup_x |F₁(x) − F₂(x)|` between the empirical
/// CDFs of two sample sets.
///
/// The two sorted sequences are merged; after consuming every copy of
/// each distinct value the step heights are compared.  Both one-sided
/// limits are covered: the value just below a jump equals the value at
/// the previous distinct point, which the walk has already visited.
pub fn ks_statistic(s1: &SampleSet, s2: &SampleSet) -> Result<f64> {
    if s1.count() == 0 || s2.count() == 0 {
        return Err(Error::EmptySampleSet);
    }
    let mut a = s1.values().to_vec();
    let mut b = s2.values().to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (m1, m2) = (a.len() as f64, b.len() as f64);

    let mut i = 0;
    let mut j = 0;
    let mut d: f64 = 0.0;
    while i < a.len() || j < b.len() {
        let v = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!(),
        };
        while i < a.len() && a[i] == v {
            i += 1;
        }
        while j < b.len() && b[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / m1 - j as f64 / m2).abs());
    }
    Ok(d)
}

/// Asymptotic two-sample rejection threshold
/// `D_α = √(−ln(α/2)/2) · √((m₁+m₂)/(m₁·m₂))`.
pub fn ks_threshold(alpha: f64, m1: usize, m2: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "significance level must lie strictly between 0 and 1, got {alpha}"
        )));
    }
    if m1 == 0 || m2 == 0 {
        return Err(Error::EmptySampleSet);
    }
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    let sizes = ((m1 + m2) as f64 / (m1 as f64 * m2 as f64)).sqrt();
    Ok(c * sizes)
}

/// Runs the two-sample test at significance `alpha`.
pub fn ks_test(s1: &SampleSet, s2: &SampleSet, alpha: f64) -> Result<KsResult> {
    let statistic = ks_statistic(s1, s2)?;
    let threshold = ks_threshold(alpha, s1.count(), s2.count())?;
    Ok(KsResult {
        statistic,
        threshold,
        alpha,
        reject: statistic > threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{EnsembleKind, EnsembleSpec, RngStream};

    fn set(values: Vec<f64>) -> SampleSet {
        let spec = EnsembleSpec::new(EnsembleKind::Gaussian, 1, None, 1).unwrap();
        SampleSet::new(spec, values).unwrap()
    }

    #[test]
    fn identical_sets_have_zero_distance() {
        let s = set(vec![0.3, 1.0, 2.5, 0.3]);
        assert_eq!(ks_statistic(&s, &s).unwrap(), 0.0);
    }

    #[test]
    fn disjoint_supports_have_unit_distance() {
        let lo = set(vec![0.1, 0.2]);
        let hi = set(vec![0.9, 1.0]);
        assert_eq!(ks_statistic(&lo, &hi).unwrap(), 1.0);
    }

    #[test]
    fn interleaved_pairs_give_one_half() {
        let a = set(vec![1.0, 3.0]);
        let b = set(vec![2.0, 4.0]);
        assert_eq!(ks_statistic(&a, &b).unwrap(), 0.5);
    }

    #[test]
    fn distance_is_symmetric_and_transform_invariant() {
        let mut rng = RngStream::new(40, 0);
        let a = set((0..300).map(|_| rng.uniform() * 2.0).collect());
        let b = set((0..200).map(|_| rng.uniform() + 0.3).collect());
        let d = ks_statistic(&a, &b).unwrap();
        assert_eq!(ks_statistic(&b, &a).unwrap(), d);
        // A common strictly increasing transform relabels the x-axis
        // without reordering anything, so D is unchanged.
        let cube = |s: &SampleSet| set(s.values().iter().map(|&v| v * v * v).collect());
        assert_eq!(ks_statistic(&cube(&a), &cube(&b)).unwrap(), d);
    }

    #[test]
    fn mismatched_sizes_are_handled_exactly() {
        // F₁ jumps by thirds, F₂ by halves; the sup lands at 2/3 − 0 = 2/3.
        let a = set(vec![1.0, 2.0, 3.0]);
        let b = set(vec![10.0, 11.0]);
        assert!((ks_statistic(&a, &b).unwrap() - 1.0).abs() < 1e-15);
        let c = set(vec![1.0, 2.0, 10.5]);
        let d = ks_statistic(&c, &b).unwrap();
        assert!((d - 2.0 / 3.0).abs() < 1e-15, "D = {d}");
    }

    #[test]
    fn threshold_matches_frozen_values() {
        let d = ks_threshold(0.05, 100_000, 100_000).unwrap();
        assert!((d - 0.00607).abs() < 1e-5, "D_α = {d}");
        let d = ks_threshold(0.05, 100, 100).unwrap();
        assert!((d - 0.1920).abs() < 5e-4, "D_α = {d}");
        // Homogeneity: quadrupling both counts halves the threshold.
        let once = ks_threshold(0.2, 500, 500).unwrap();
        let four = ks_threshold(0.2, 2000, 2000).unwrap();
        assert!((once / four - 2.0).abs() < 1e-12);
    }

    #[test]
    fn test_combines_statistic_and_threshold() {
        // At 10 vs 10 the α = 0.05 threshold is ≈ 0.6, so disjoint
        // supports reject.  (At 3 vs 3 it exceeds 1 and nothing can.)
        let lo = set((0..10).map(|i| 0.1 + 0.01 * i as f64).collect());
        let hi = set((0..10).map(|i| 0.9 + 0.01 * i as f64).collect());
        let r = ks_test(&lo, &hi, 0.05).unwrap();
        assert_eq!(r.statistic, 1.0);
        assert!(r.threshold > 0.6 && r.threshold < 0.61);
        assert!(r.reject);
        assert_eq!(r.alpha, 0.05);
        let same = ks_test(&lo, &lo, 0.05).unwrap();
        assert!(!same.reject);
        assert_eq!(same.statistic, 0.0);
    }

    #[test]
    fn preconditions_are_enforced() {
        let s = set(vec![1.0]);
        let empty = set(vec![]);
        assert!(matches!(
            ks_statistic(&s, &empty),
            Err(Error::EmptySampleSet)
        ));
        assert!(matches!(
            ks_threshold(0.0, 10, 10),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            ks_threshold(1.0, 10, 10),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(ks_threshold(0.05, 0, 10), Err(Error::EmptySampleSet)));
    }
}
