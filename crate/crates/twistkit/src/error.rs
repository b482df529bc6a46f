use thiserror::Error;

use crate::surface::SurfaceError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("curve `{0}` does not resolve in the built stages")]
    Unresolved(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("stage {stage} requested but only {built} stages are built")]
    StageOutOfRange { stage: usize, built: usize },
    #[error("stage {0} is too small: marking comparisons need n >= 2 (genus at least 3)")]
    StageTooSmall(usize),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("curves {0} and {1} intersect, so they do not form a multicurve")]
    NotMulticurve(String, String),
    #[error("word family is incoherent at stage {0}")]
    Incoherent(usize),
    #[error("lazy entity `{0}` has no stage bound")]
    Unbounded(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
