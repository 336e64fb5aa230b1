use std::path::PathBuf;

use thiserror::Error;

use crate::model::ValidationIssue;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid performance matrix: {}", join_issues(.0))]
    Validation(Vec<ValidationIssue>),

    #[error("weight {index} is {value}, weights must be positive and finite")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },

    #[error("cannot parse weight list '{0}'")]
    WeightList(String),

    #[error("absolute weights sum to {sum}, expected 1")]
    WeightSum { sum: f64 },

    #[error("criterion index {index} out of range for {n} criteria")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("alternative {row} coincides with both the ideal and the antiideal")]
    DegenerateGeometry { row: usize },

    #[error("permutations have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("not a permutation of 0..{len}")]
    NotAPermutation { len: usize },

    #[error("at least {needed} criteria are required, got {got}")]
    TooFewCriteria { needed: usize, got: usize },

    #[error("criteria of year {year} differ from the rest of the panel")]
    CriteriaMismatch { year: i32 },

    #[error("estimator needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("TOPSIS scores have zero variance")]
    ZeroOutputVariance,

    #[error("no year has at least {min_programs} ranked programs")]
    EmptyWindow { min_programs: usize },

    #[error("unknown criterion '{0}'")]
    UnknownCriterion(String),

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("cannot access {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}

fn join_issues(issues: &[ValidationIssue]) -> String {
    issues
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
