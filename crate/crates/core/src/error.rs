use thiserror::Error;

use crate::state::Subsystem;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("amplitude {index} is not finite")]
    NonFinite { index: usize },

    #[error("state has vanishing norm (sum of |d|^2 = {norm_sq:e})")]
    ZeroNorm { norm_sq: f64 },

    #[error("state is not normalized (sum of |d|^2 = {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("invalid beam parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid coherence matrix: {0}")]
    InvalidMatrix(String),

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("separability radicand {radicand:e} outside the admissible domain")]
    NumericalDomain { radicand: f64 },

    #[error("value {value} out of range [{min}, {max}] for {what}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("reduced matrix of subsystem {sub} has a vanishing eigenvalue ({lambda:e}); the state is a product across this cut")]
    DegenerateBranch { sub: Subsystem, lambda: f64 },

    #[error("unknown recipe {0:?} (expected E1..E6)")]
    UnknownRecipe(String),

    #[error("projection pair for subsystem {sub}, axis {axis} recorded zero counts")]
    EmptyCounts { sub: Subsystem, axis: char },

    #[error("parse error: {0}")]
    Parse(String),
}
