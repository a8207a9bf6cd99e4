use std::path::PathBuf;
use thiserror::Error;

/// Crate-wide error type.
///
/// Variants map to the error families the CLI translates into distinct
/// exit codes: configuration, I/O, format, shape/compatibility, data
/// availability, cost refusal, and numeric failure.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensions {height}x{width}: {reason}")]
    InvalidDimension {
        height: usize,
        width: usize,
        reason: &'static str,
    },

    #[error("shape mismatch: expected {expected}, got {actual}")]
    ShapeMismatch { expected: String, actual: String },

    #[error("spectral index {index} out of range (N = {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("matrix is not symmetric (max |A - A^T| entry = {max_dev:.3e})")]
    NotSymmetric { max_dev: f64 },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unsupported format: {0}")]
    Format(String),

    #[error("sampling exhausted: {0}")]
    SamplingExhausted(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("class '{0}' has no samples")]
    EmptyClass(&'static str),

    #[error("metric undefined: {0}")]
    UndefinedMetric(&'static str),

    #[error(
        "refusing exact Shapley over {features} features (limit {limit}, cost 2^d); \
         use the sampled or deeplift method instead"
    )]
    CostRefusal { features: usize, limit: usize },

    #[error("training diverged at epoch {epoch}, batch {batch}: non-finite loss")]
    Divergence { epoch: usize, batch: usize },

    #[error("incompatible artifact: {0}")]
    Incompatible(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
