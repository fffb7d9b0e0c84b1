use std::path::PathBuf;

use thiserror::Error;

use crate::scenario::Violation;

/// Failures raised while constructing turns and legs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("assumption violated: {0}")]
    AssumptionViolated(String),
    #[error("no leg exists: {0}")]
    NoSolution(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] GeometryError),

    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("scenario failed validation ({} violation(s)): {}", .0.len(), summarize(.0))]
    Validation(Vec<Violation>),

    #[error("glider {glider} cannot reach its final position along any valid order")]
    Infeasible { glider: String },

    #[error("brute force would enumerate {count} allocation sets (limit {limit})")]
    TooLarge { count: u128, limit: u128 },

    #[error("plan does not match scenario: {0}")]
    Structure(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization failed: {0}")]
    Serialize(#[from] serde_json::Error),
}

fn summarize(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
