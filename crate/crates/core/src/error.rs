use thiserror::Error;

/// Errors raised by the Krein-space routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid fundamental symmetry: {0}")]
    InvalidSymmetry(String),

    #[error("classification failed: {0}")]
    Classification(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("not a frame: {0}")]
    NotAFrame(String),

    #[error("column {index} is J-neutral ([f,f] = {value:.3e})")]
    NeutralVector { index: usize, value: f64 },

    #[error("not a J-frame: {0}")]
    NotAJFrame(String),

    #[error("operator is not surjective: {0}")]
    NotSurjective(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("operator error: {0}")]
    Operator(String),
}

pub type Result<T> = std::result::Result<T, Error>;
