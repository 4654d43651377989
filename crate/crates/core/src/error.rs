use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite component in {0}")]
    NonFinite(&'static str),

    #[error("turbulent kinetic energy {k:e} is at or below the floor; anisotropy is undefined")]
    DegenerateTke { k: f64 },

    #[error("eigenvector matrix is not orthonormal (max deviation {deviation:e})")]
    InvalidFrame { deviation: f64 },

    #[error("anisotropy eigenvalues are not trace-free (trace {trace:e})")]
    NotTraceFree { trace: f64 },

    #[error("state is not realizable: barycentric weight {index} is {weight:e}")]
    Realizability { index: usize, weight: f64 },

    #[error("degenerate triangle geometry (area {area:e})")]
    Geometry { area: f64 },

    #[error("{name} = {value} is outside [0, 1]")]
    InvalidMagnitude { name: &'static str, value: f64 },

    #[error("{0} triple is not sorted in descending order")]
    Ordering(&'static str),

    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grid error: {0}")]
    Grid(String),

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("aggregation error: {0}")]
    Aggregation(String),

    #[error("invalid solver command template: {0}")]
    Template(String),

    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed solution file {path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
