use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed header: {0}")]
    MalformedHeader(String),

    #[error("empty dimension: {0} must be >= 1")]
    EmptyDimension(&'static str),

    #[error("sample-count mismatch: header implies {expected} samples, file holds {found}")]
    SampleCountMismatch { expected: usize, found: usize },

    #[error("degenerate range: all finite values equal")]
    DegenerateRange,

    #[error("malformed boundary file (line {line}): {reason}")]
    MalformedBoundary { line: usize, reason: String },

    #[error("point ({x}, {y}) outside {width}x{height} section")]
    OutOfBounds {
        x: i64,
        y: i64,
        width: usize,
        height: usize,
    },

    #[error("inline {0} not in volume")]
    NoSuchInline(i64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("input not normalized to [0, 1]")]
    NotNormalized,

    #[error("invalid tensor mode {0} (expected 1, 2 or 3)")]
    InvalidMode(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("all-zero tensor has no subspace")]
    ZeroTensor,

    #[error("boundary input is empty")]
    EmptyBoundary,

    #[error("no patch-admissible start point on boundary")]
    NoAdmissibleStart,

    #[error("boundary is disconnected: traversal reached {visited} of {total} admissible points")]
    Disconnected { visited: usize, total: usize },

    #[error("degenerate tangent at point {0}: window points coincide")]
    DegenerateTangent(usize),

    #[error("patch centred at ({x}, {y}) overruns the section or covers dead samples")]
    PatchOverrun { x: i64, y: i64 },

    #[error("no admissible candidate for boundary point {0}")]
    NoAdmissibleCandidate(usize),

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("tracking unstable: {rejected} of {total} points rejected")]
    TrackingUnstable { rejected: usize, total: usize },

    #[error("degenerate segmentation: {0}")]
    DegenerateSegmentation(String),

    #[error("synthetic dome violates section margin: {0}")]
    MarginViolation(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of the numerical pipeline itself rather than of
    /// the inputs handed to it.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::TrackingUnstable { .. }
                | Error::ZeroTensor
                | Error::DegenerateTangent(_)
                | Error::DegenerateSegmentation(_)
                | Error::NoAdmissibleCandidate(_)
        )
    }
}
