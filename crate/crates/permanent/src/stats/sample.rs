//! Normalized permanent samples and their line-oriented text format.
//!
//! The natural scale for permanent magnitudes is `X = |per(A)| / √n!`:
//! several ensembles have `⟨X²⟩ = 1` exactly, so samples of X can be
//! compared across orders.  A [`SampleSet`] couples the values with the
//! [`EnsembleSpec`] that produced them so analyses stay self-describing.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::dense::permanent;
use crate::ensembles::{sample_matrix, EnsembleKind, EnsembleSpec};
use crate::error::{Error, Result};
use crate::matrix::{AccumulationMode, Scalar};
use crate::par;

/// Largest order whose factorial is representable in an `f64`.
pub const MAX_NORMALIZED_ORDER: usize = 170;

/// `ln n!`, accumulated term by term so the normalizer never overflows.
fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Non-negative samples of `X = |per(A)| / √n!` for one ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    spec: EnsembleSpec,
    values: Vec<f64>,
}

impl SampleSet {
    /// Wraps already-normalized values, rejecting negative or non-finite
    /// entries.
    pub fn new(spec: EnsembleSpec, values: Vec<f64>) -> Result<Self> {
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "sample {i} is {v}; samples must be finite and non-negative"
                )));
            }
        }
        Ok(SampleSet { spec, values })
    }

    /// The ensemble that produced these samples.
    pub fn spec(&self) -> &EnsembleSpec {
        &self.spec
    }

    /// The normalized values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of samples.
    pub fn count(&self) -> usize {
        self.values.len()
    }

    /// Renders the set in the text format: a `#`-prefixed header naming
    /// the ensemble, then one value per line at 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write!(out, "# ensemble={} n={}", self.spec.kind(), self.spec.n()).unwrap();
        if let Some(a) = self.spec.exponent() {
            write!(out, " a={a}").unwrap();
        }
        writeln!(out, " seed={} count={}", self.spec.seed(), self.count()).unwrap();
        for v in &self.values {
            writeln!(out, "{v:.16e}").unwrap();
        }
        out
    }

    /// Writes [`Self::to_text`] to a file.
    pub fn write_to(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })
    }

    /// Parses the text format; `label` names the source in errors.
    pub fn parse(text: &str, label: &str) -> Result<Self> {
        let fail = |line: usize, msg: String| Error::Parse {
            path: label.to_string(),
            line,
            msg,
        };
        let mut lines = text.lines().enumerate();
        let (header_line, header) = lines
            .by_ref()
            .find(|(_, l)| !l.trim().is_empty())
            .ok_or_else(|| fail(1, "empty sample file".to_string()))?;
        let header = header
            .trim()
            .strip_prefix('#')
            .ok_or_else(|| fail(header_line + 1, "expected a '#' header line".to_string()))?;

        let mut kind = None;
        let mut n = None;
        let mut exponent = None;
        let mut seed = None;
        let mut count = None;
        for token in header.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| fail(header_line + 1, format!("malformed header token {token:?}")))?;
            let bad = |what: &str| fail(header_line + 1, format!("invalid {what} {value:?}"));
            match key {
                "ensemble" => {
                    kind = Some(EnsembleKind::from_str(value).map_err(|_| bad("ensemble"))?);
                }
                "n" => n = Some(value.parse::<usize>().map_err(|_| bad("order"))?),
                "a" => exponent = Some(value.parse::<f64>().map_err(|_| bad("exponent"))?),
                "seed" => seed = Some(value.parse::<u64>().map_err(|_| bad("seed"))?),
                "count" => count = Some(value.parse::<usize>().map_err(|_| bad("count"))?),
                other => {
                    return Err(fail(
                        header_line + 1,
                        format!("unknown header field {other:?}"),
                    ));
                }
            }
        }
        let missing =
            |what: &str| fail(header_line + 1, format!("header is missing {what}"));
        let kind = kind.ok_or_else(|| missing("ensemble="))?;
        let n = n.ok_or_else(|| missing("n="))?;
        let seed = seed.ok_or_else(|| missing("seed="))?;
        let count = count.ok_or_else(|| missing("count="))?;
        let spec = EnsembleSpec::new(kind, n, exponent, seed)?;

        let mut values = Vec::with_capacity(count);
        for (idx, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v: f64 = line
                .parse()
                .map_err(|_| fail(idx + 1, format!("invalid sample value {line:?}")))?;
            if !v.is_finite() || v < 0.0 {
                return Err(fail(
                    idx + 1,
                    format!("sample value {v} must be finite and non-negative"),
                ));
            }
            values.push(v);
        }
        if values.len() != count {
            return Err(fail(
                header_line + 1,
                format!("header promises {count} samples but {} follow", values.len()),
            ));
        }
        SampleSet::new(spec, values)
    }

    /// Reads and parses a sample file.
    pub fn read_from(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }
}

/// Normalizes raw permanent values to `X_i = |p_i| / √n!`.
///
/// The factorial is accumulated in log space, so any order up to
/// [`MAX_NORMALIZED_ORDER`] is safe even though `n!` itself would
/// overflow long before that.
pub fn normalized_samples(spec: &EnsembleSpec, permanents: &[Scalar]) -> Result<SampleSet> {
    let n = spec.n();
    if n > MAX_NORMALIZED_ORDER {
        return Err(Error::OrderTooLarge {
            n,
            max: MAX_NORMALIZED_ORDER,
            algorithm: "normalization",
        });
    }
    let scale = (-0.5 * ln_factorial(n)).exp();
    let values = permanents.iter().map(|p| p.norm() * scale).collect();
    SampleSet::new(*spec, values)
}

/// Draws `count` matrices from the ensemble, computes each permanent
/// exactly, and returns the normalized samples.
///
/// Sample indices — not threads — partition the work, and each permanent
/// runs on a single logical worker, so the output is bit-identical for
/// every thread count and for the serial build.
pub fn collect_samples(
    spec: &EnsembleSpec,
    count: usize,
    mode: AccumulationMode,
) -> Result<SampleSet> {
    if count == 0 {
        return Err(Error::EmptySampleSet);
    }
    let computed: Vec<Result<Scalar>> = par::indexed_map(count, |index| {
        let a = sample_matrix(spec, index as u64);
        permanent(&a, 1, mode).map(|r| r.value)
    });
    let mut permanents = Vec::with_capacity(count);
    for r in computed {
        permanents.push(r?);
    }
    normalized_samples(spec, &permanents)
}
