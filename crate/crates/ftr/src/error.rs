use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("grid needs at least 2 nodes per axis, got {nx} x {ny}")]
    GridTooSmall { nx: usize, ny: usize },
    #[error("grid extents must be positive, got {lx} x {ly}")]
    GridBadExtent { lx: f64, ly: f64 },
    #[error("snapshot series must contain at least one snapshot")]
    EmptySeries,
    #[error("snapshot {index} has {got} samples, expected {expected}")]
    FieldSizeMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("snapshot times must be strictly increasing (violated at index {index})")]
    TimesNotIncreasing { index: usize },
    #[error("snapshot {index} contains a non-finite sample")]
    NonFiniteField { index: usize },
    #[error("matrix contains non-finite entries")]
    NonFiniteMatrix,
    #[error("matrix has {rows} rows and {cols} columns, expected {expected_rows} x {expected_cols}")]
    MatrixShapeMismatch {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("requested rank {n} exceeds the available rank {rank}")]
    RankOutOfRange { n: usize, rank: usize },
    #[error("singular spectrum of an all-zero matrix is undefined")]
    ZeroMatrix,
    #[error("threshold {threshold} lies outside the data range [{min}, {max}]")]
    ThresholdOutOfRange { threshold: f64, min: f64, max: f64 },
    #[error("snapshot {index} has no level crossing: the field does not straddle the threshold")]
    EmptyContour { index: usize },
    #[error("degenerate segment: endpoints coincide")]
    DegenerateSegment,
    #[error("edge values {a} and {b} do not straddle the threshold {threshold}")]
    NoEdgeCrossing { a: f64, b: f64, threshold: f64 },
    #[error("field sample count {got} does not match the grid ({expected} nodes)")]
    FieldGridMismatch { got: usize, expected: usize },
    #[error("parameter {name} must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("parameter {name} must be at least {min}, got {value}")]
    ParameterTooSmall {
        name: &'static str,
        min: usize,
        value: usize,
    },
    #[error("no samples fell inside the band; widen the band")]
    NoSamples,
    #[error("operation requires 2D snapshot data")]
    NotTwoDimensional,
    #[error("unknown {kind} '{name}' (available: {available})")]
    UnknownName {
        kind: &'static str,
        name: String,
        available: String,
    },
    #[error("bad magic: not a snapshot container file")]
    BadMagic,
    #[error("unsupported container version {got}, expected {expected}")]
    VersionMismatch { got: u32, expected: u32 },
    #[error("truncated payload: need {expected} bytes, found {got}")]
    TruncatedPayload { expected: u64, got: u64 },
    #[error("trailing data: file holds {got} bytes, expected exactly {expected}")]
    TrailingData { expected: u64, got: u64 },
    #[error("ragged table: column '{name}' has {got} rows, expected {expected}")]
    RaggedColumns {
        name: String,
        got: usize,
        expected: usize,
    },
    #[error("malformed CSV cell '{cell}' at line {line}")]
    BadCsvCell { cell: String, line: usize },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
