//! Error type shared by the whole crate.

use crate::generator::QuasiSet;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dihedral order parameter m must be at least 2, got {0}")]
    InvalidGroup(u32),

    #[error("shell seed must be a nonzero vector")]
    ZeroShell,

    #[error("shell seed has {got} components, group needs {expected}")]
    ShellArity { expected: usize, got: usize },

    #[error("orbit closure exceeded {limit} points; generators or tolerance are suspect")]
    OrbitOverflow { limit: usize },

    #[error("shell union is not inversion-symmetric within tolerance")]
    AsymmetricCluster,

    #[error("not a G-cluster: {0}")]
    NotAGCluster(String),

    #[error("vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("superspace dimension {k} admits no facet tuples for physical dimension {n}")]
    EmptyStrip { k: usize, n: usize },

    #[error("generation exceeded max_points = {max_points}")]
    Truncated {
        max_points: usize,
        partial: Box<QuasiSet>,
    },

    #[error("patch contains no points")]
    EmptyPatch,

    #[error("test radius {r_test} exceeds interior bound {bound}")]
    PatchNotInterior { r_test: f64, bound: f64 },

    #[error("need at least two points")]
    TooFewPoints,

    #[error("line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("missing key: {key}")]
    ConfigMissing { key: &'static str },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(line: usize, msg: impl Into<String>) -> Self {
        Error::Config {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
