use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    /// The unscaled value does not fit in binary64; use the scaled variant.
    #[error("I_{order}({x}) overflows binary64; use the exponentially scaled variant")]
    BesselRange { order: u32, x: f64 },

    #[error("quadrature did not reach tolerance: {0}")]
    Quadrature(String),

    #[error("dimension mismatch: cutoff {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid coefficient: {0}")]
    InvalidCoefficient(String),

    #[error("matrix is not Hermitian (asymmetry {asymmetry:e}, allowed {allowed:e})")]
    NotHermitian { asymmetry: f64, allowed: f64 },

    #[error("Neumann series guard failed: norm {norm} exceeds {delta}")]
    SeriesDivergence { norm: f64, delta: f64 },

    #[error("boundary operator is ill-conditioned (condition estimate {0:e})")]
    IllConditioned(f64),

    #[error("eigensolver failure: {0}")]
    SolverFailure(String),

    #[error("fit window too small or outside the safety margin: {0}")]
    WindowTooSmall(String),

    #[error("no power law at exponent {exponent}: residual {residual}")]
    NoPowerLaw { exponent: f64, residual: f64 },

    #[error("principal symbol is negative on the arc (value {0})")]
    NegativeSymbol(f64),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
