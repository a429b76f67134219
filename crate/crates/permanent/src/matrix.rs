//! Dense square matrices over the reals or complexes, plus the plain-text
//! interchange format used by the command-line tools.
//!
//! The format is line oriented.  Lines whose first non-blank character is
//! `#` are comments.  The first data line is a header `<kind> <rows> <cols>`
//! with `<kind>` one of `real` or `complex`; each following data line holds
//! one matrix row.  Real rows carry `cols` numbers; complex rows carry
//! `2*cols` numbers as alternating real and imaginary parts.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Scalar type used throughout: double-precision complex numbers.
/// Real matrices are stored with all imaginary parts exactly zero.
pub type Scalar = Complex64;

/// Whether a matrix carries real or complex entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Real,
    Complex,
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixKind::Real => write!(f, "real"),
            MatrixKind::Complex => write!(f, "complex"),
        }
    }
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(MatrixKind::Real),
            "complex" => Ok(MatrixKind::Complex),
            other => Err(Error::UnknownName {
                what: "matrix kind",
                value: other.to_string(),
            }),
        }
    }
}

/// How floating-point sums are accumulated inside the permanent kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AccumulationMode {
    /// Ordinary floating-point addition.
    Plain,
    /// Kahan compensated summation, applied separately to real and
    /// imaginary parts.
    #[default]
    Compensated,
    /// Double-double accumulation: an unevaluated sum of two doubles
    /// carries roughly twice the working precision.
    Extended,
}

impl fmt::Display for AccumulationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AccumulationMode::Plain => write!(f, "plain"),
            AccumulationMode::Compensated => write!(f, "compensated"),
            AccumulationMode::Extended => write!(f, "extended"),
        }
    }
}

impl FromStr for AccumulationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(AccumulationMode::Plain),
            "compensated" => Ok(AccumulationMode::Compensated),
            "extended" => Ok(AccumulationMode::Extended),
            other => Err(Error::UnknownName {
                what: "accumulation mode",
                value: other.to_string(),
            }),
        }
    }
}

/// A dense square matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    kind: MatrixKind,
    n: usize,
    entries: Vec<Scalar>,
    band_width: usize,
}

impl Matrix {
    /// Builds a matrix from row-major entries, validating shape and
    /// finiteness.  Real-kind matrices must have zero imaginary parts.
    pub fn new(kind: MatrixKind, n: usize, entries: Vec<Scalar>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if entries.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries for order {n}, got {}",
                n * n,
                entries.len()
            )));
        }
        let mut band_width = 0usize;
        for (idx, v) in entries.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite {
                    row: idx / n,
                    col: idx % n,
                });
            }
            if kind == MatrixKind::Real && v.im != 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "real-kind matrix has a non-zero imaginary part at row {}, column {}",
                    idx / n,
                    idx % n
                )));
            }
            if v.re != 0.0 || v.im != 0.0 {
                band_width = band_width.max((idx / n).abs_diff(idx % n));
            }
        }
        Ok(Matrix {
            kind,
            n,
            entries,
            band_width,
        })
    }

    /// Builds a real-kind matrix from row-major `f64` values.
    pub fn from_real(n: usize, values: &[f64]) -> Result<Self> {
        let entries = values.iter().map(|&v| Scalar::new(v, 0.0)).collect();
        Matrix::new(MatrixKind::Real, n, entries)
    }

    /// The order-`n` all-ones matrix, whose permanent is `n!`.
    pub fn all_ones(n: usize) -> Result<Self> {
        Matrix::new(MatrixKind::Real, n, vec![Scalar::new(1.0, 0.0); n * n])
    }

    /// Matrix order.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry kind.
    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    /// True when all entries are real.
    pub fn is_real(&self) -> bool {
        self.kind == MatrixKind::Real
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    /// Entry at `(row, col)`.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Scalar {
        self.entries[row * self.n + col]
    }

    /// One row as a slice.
    #[inline]
    pub fn row(&self, row: usize) -> &[Scalar] {
        &self.entries[row * self.n..(row + 1) * self.n]
    }

    /// Number of non-zero entries.
    pub fn nnz(&self) -> usize {
        self.entries
            .iter()
            .filter(|v| v.re != 0.0 || v.im != 0.0)
            .count()
    }

    /// Fraction of entries that are non-zero.
    pub fn density(&self) -> f64 {
        self.nnz() as f64 / (self.n * self.n) as f64
    }

    /// Smallest `k` such that every non-zero entry satisfies `|i - j| <= k`.
    /// Computed once at construction; this accessor is O(1).
    pub fn band_width(&self) -> usize {
        self.band_width
    }

    /// Index of a row with empty support, if any.
    pub fn zero_row(&self) -> Option<usize> {
        (0..self.n).find(|&i| {
            self.row(i)
                .iter()
                .all(|v| v.re == 0.0 && v.im == 0.0)
        })
    }

    /// Index of a column with empty support, if any.
    pub fn zero_column(&self) -> Option<usize> {
        (0..self.n).find(|&j| {
            (0..self.n).all(|i| {
                let v = self.get(i, j);
                v.re == 0.0 && v.im == 0.0
            })
        })
    }

    /// Parses the text format from a string.  `path` is used in error
    /// messages only.
    pub fn parse(text: &str, path: &str) -> Result<Self> {
        let mut tokens: Vec<(usize, &str)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let trimmed = line.trim_start();
            if trimmed.starts_with('#') {
                continue;
            }
            for tok in line.split_whitespace() {
                tokens.push((lineno + 1, tok));
            }
        }
        let mut pos = 0usize;
        let mut next = |what: &str| -> Result<(usize, &str)> {
            let t = tokens.get(pos).copied().ok_or_else(|| Error::Parse {
                path: path.to_string(),
                line: text.lines().count(),
                msg: format!("unexpected end of input; expected {what}"),
            })?;
            pos += 1;
            Ok(t)
        };

        let (line, kind_tok) = next("matrix kind")?;
        let kind: MatrixKind = kind_tok.parse().map_err(|_| Error::Parse {
            path: path.to_string(),
            line,
            msg: format!("unknown matrix kind {kind_tok:?}; expected \"real\" or \"complex\""),
        })?;
        let parse_dim = |(line, tok): (usize, &str)| -> Result<usize> {
            tok.parse::<usize>().map_err(|_| Error::Parse {
                path: path.to_string(),
                line,
                msg: format!("invalid dimension {tok:?}"),
            })
        };
        let rows = parse_dim(next("row count")?)?;
        let cols = parse_dim(next("column count")?)?;
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::EmptyMatrix);
        }
        let n = rows;
        let per_entry = match kind {
            MatrixKind::Real => 1,
            MatrixKind::Complex => 2,
        };
        let mut entries = Vec::with_capacity(n * n);
        for idx in 0..n * n {
            let mut parts = [0.0f64; 2];
            for part in parts.iter_mut().take(per_entry) {
                let (line, tok) = next("matrix entry")?;
                *part = tok.parse::<f64>().map_err(|_| Error::Parse {
                    path: path.to_string(),
                    line,
                    msg: format!("invalid number {tok:?}"),
                })?;
            }
            let v = Scalar::new(parts[0], parts[1]);
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite {
                    row: idx / n,
                    col: idx % n,
                });
            }
            entries.push(v);
        }
        if pos != tokens.len() {
            let (line, tok) = tokens[pos];
            return Err(Error::Parse {
                path: path.to_string(),
                line,
                msg: format!("trailing input {tok:?} after {} entries", n * n),
            });
        }
        Matrix::new(kind, n, entries)
    }

    /// Reads a matrix file.
    pub fn read_from(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Matrix::parse(&text, &path.display().to_string())
    }

    /// Renders the text format.  Numbers use 17 significant digits so a
    /// write/read round trip is bit-exact.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{} {} {}\n", self.kind, self.n, self.n));
        for i in 0..self.n {
            let mut fields = Vec::with_capacity(self.n * 2);
            for j in 0..self.n {
                let v = self.get(i, j);
                fields.push(format!("{:.16e}", v.re));
                if self.kind == MatrixKind::Complex {
                    fields.push(format!("{:.16e}", v.im));
                }
            }
            out.push_str(&fields.join(" "));
            out.push('\n');
        }
        out
    }

    /// Writes the text format to a file.
    pub fn write_to(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })
    }
}
