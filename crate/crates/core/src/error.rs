use thiserror::Error;

/// Errors raised while building or validating Tukey regions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid point cloud: {0}")]
    InvalidCloud(String),

    #[error("depth level {tau} is invalid for n = {n} (need 1/n <= tau <= 1)")]
    InvalidDepthLevel { tau: f64, n: usize },

    #[error("ridge {ridge:?} is rank deficient (points not affinely independent)")]
    RankDeficient { ridge: Vec<usize> },

    #[error("point {index} projects degenerately with respect to ridge {ridge:?}")]
    DegenerateProjection { ridge: Vec<usize>, index: usize },

    #[error("duplicate index {0} in tuple")]
    DuplicateIndex(usize),

    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("seeding failed after {attempts} random directions")]
    SeedingFailed {
        attempts: usize,
        directions: Vec<Vec<f64>>,
    },

    #[error("observations {first} and {second} have tied projections")]
    TiedProjection { first: usize, second: usize },

    #[error("tuple {tuple:?} disagrees on the offset by {spread:e}")]
    InconsistentOffset { tuple: Vec<usize>, spread: f64 },

    #[error("linear program is unbounded: {0}")]
    UnboundedLp(String),

    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),

    #[error("input has affine dimension {rank}, expected {dim}")]
    DegenerateInput { rank: usize, dim: usize },

    #[error("instance size {count} exceeds the cap {cap}")]
    CapExceeded { count: u128, cap: u128 },

    #[error("format unsupported: {0}")]
    FormatUnsupported(String),

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("row {row} has {found} columns, expected {expected}")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
