use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("potential is not finite at x = {x}")]
    NonFinitePotential { x: f64 },

    #[error("x = {x} lies outside the support {support}")]
    OutOfSupport { x: f64, support: String },

    #[error("inputs are tabulated on different grids")]
    GridMismatch,

    #[error("not normalizable on this grid: {0}")]
    NotNormalizable(String),

    #[error("Pearson denominator vanishes at or next to x = {x}")]
    PearsonPole { x: f64 },

    #[error("target moment {target} is outside the attainable range ({min}, {max})")]
    Unattainable { target: f64, min: f64, max: f64 },

    #[error("too few samples: got {got}, need at least {need}")]
    TooFewSamples { got: usize, need: usize },

    #[error("all {0} samples fall outside the grid")]
    AllOutOfRange(usize),

    #[error("stability guard violated: dt * max|E^c| = {product} (must be < 0.5)")]
    Stability { product: f64 },

    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
