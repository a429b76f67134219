//! Error type shared by every fallible operation in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while reading inputs, validating shapes,
/// or running one of the permanent algorithms.
#[derive(Debug, Error)]
pub enum Error {
    /// Underlying I/O failure while reading or writing a file.
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Malformed text input (matrix or sample file).
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    /// Permanents are only defined for square matrices.
    #[error("matrix is {rows}x{cols}; a square matrix is required")]
    NotSquare { rows: usize, cols: usize },

    /// Matrix entries must be finite numbers.
    #[error("non-finite entry at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    /// Order must be at least one.
    #[error("matrix order must be at least 1")]
    EmptyMatrix,

    /// The requested order is beyond what the named algorithm supports.
    #[error("order {n} exceeds the limit of {max} for the {algorithm} algorithm")]
    OrderTooLarge {
        n: usize,
        max: usize,
        algorithm: &'static str,
    },

    /// An argument that must be positive or in range was not.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A row (or column) has empty support, so no column partition exists.
    #[error("row {index} of the matrix is identically zero; no column partition exists")]
    ZeroRow { index: usize },

    /// A column has empty support, so no column partition exists.
    #[error("column {index} of the matrix is identically zero; no column partition exists")]
    ZeroColumn { index: usize },

    /// A user-supplied column partition does not match the matrix.
    #[error("invalid column partition: {0}")]
    InvalidPartition(String),

    /// The matrix has non-zero entries outside the claimed band.
    #[error("entry at row {row}, column {col} lies outside the claimed bandwidth {bandwidth}")]
    BandwidthViolation {
        row: usize,
        col: usize,
        bandwidth: usize,
    },

    /// The banded algorithm's coefficient table would not fit in memory.
    #[error("band window of {width} variables is too wide; at most {max} are supported")]
    BandWindowTooWide { width: usize, max: usize },

    /// Unitary-minor ensembles need a host dimension at least as large as the minor.
    #[error("host dimension {m} is smaller than minor order {n}")]
    MinorTooLarge { m: usize, n: usize },

    /// Sample sets must be non-empty for statistics.
    #[error("sample set is empty")]
    EmptySampleSet,

    /// The empirical distribution needs at least one positive sample.
    #[error("all samples are zero; no logarithmic grid exists")]
    AllSamplesZero,

    /// Polynomial fitting needs more points than coefficients.
    #[error("{points} points cannot determine {coefficients} coefficients")]
    Underdetermined { points: usize, coefficients: usize },

    /// The least-squares system was numerically singular.
    #[error("degenerate fit: the design matrix is singular")]
    DegenerateFit,

    /// A keyword that must be one of a known set was not recognized.
    #[error("unknown {what}: {value}")]
    UnknownName { what: &'static str, value: String },
}
