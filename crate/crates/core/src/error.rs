//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A CSV cell failed to parse as a number. Rows and columns are
    /// 1-based; the header row, when present, is not counted.
    #[error("parse error at row {row}, column {col}: {value:?} is not a number")]
    CsvParse {
        row: usize,
        col: usize,
        value: String,
    },

    /// A CSV row had a different number of columns than the first row.
    #[error("shape error at row {row}: expected {expected} columns, found {found}")]
    CsvShape {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A nearest-neighbor query ran against an index with no alive points.
    #[error("spatial index exhausted: no alive points remain")]
    Exhausted,

    /// Phase-1 clustering of the sample produced no clusters.
    #[error("seeding failed: {0}; adjust the phase-1 parameters or sample fraction")]
    Seeding(String),

    #[error("metric undefined: {0}")]
    UndefinedMetric(String),

    /// Internal contract violation, e.g. marking an already-assigned
    /// point a second time.
    #[error("logic error: {0}")]
    Logic(String),
}
