use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown constellation `{0}`")]
    UnknownConstellation(String),
    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("designed quantizer has duplicate boundaries (degenerate sample set)")]
    DuplicateBoundaries,
    #[error("invalid quantizer: {0}")]
    InvalidQuantizer(String),
    #[error("bin {0} carries zero probability under both code bits")]
    ZeroMassBin(usize),
    #[error("bin {0} yields a non-finite quantization level")]
    NonFiniteLevel(usize),
    #[error("density is singular at xi = 0")]
    SingularPoint,
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("labeled samples contain no instance of bit {0}")]
    MissingBit(u8),
    #[error("empty sample list")]
    Empty,
    #[error("target rate {target} unreachable within [{lo_db}, {hi_db}] dB")]
    Unreachable { target: f64, lo_db: f64, hi_db: f64 },
    #[error("no parametric model matches the probe probabilities")]
    InfeasibleFit,
    #[error("code construction failed: {0}")]
    Construction(String),
    #[error("parse error: {0}")]
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
