use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter s = {s} lies outside the curve domain [{min}, {max}]")]
    OutOfDomain { s: f64, min: f64, max: f64 },

    #[error("curvature {kappa:e} at s = {s} is at or below the floor {floor:e}; the Frenet frame is undefined")]
    CurvatureVanishes { s: f64, kappa: f64, floor: f64 },

    #[error("stencil [{lo}, {hi}] around s = {s} leaves the curve domain [{min}, {max}]")]
    StencilOutOfDomain {
        s: f64,
        lo: f64,
        hi: f64,
        min: f64,
        max: f64,
    },

    #[error("invalid family parameters: {0}")]
    InvalidParams(String),

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("indicatrix trace is empty")]
    EmptyTrace,

    #[error("invalid samples: {0}")]
    InvalidSamples(String),

    #[error("derivative order {order} is not supported (maximum {max})")]
    UnsupportedOrder { order: usize, max: usize },

    #[error("finite-difference step must be positive and finite, got {0}")]
    InvalidStep(f64),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
