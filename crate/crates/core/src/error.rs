use thiserror::Error;

/// Errors raised across model construction, graph generation, simulation and analysis.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FloodError {
    #[error("invalid degree model: {0}")]
    InvalidModel(String),

    #[error("degree model has zero mean degree")]
    ZeroMeanDegree,

    #[error("invalid graph parameters: {0}")]
    InvalidGraphParams(String),

    #[error("degree sequence sum stayed odd after {0} resamples")]
    OddDegreeSum(usize),

    #[error("invalid flooding rule: {0}")]
    InvalidRule(String),

    #[error("node {0} is not in the flooding component")]
    OriginatorOutsideComponent(usize),

    #[error("component is empty")]
    EmptyComponent,

    #[error("invalid batch parameters: {0}")]
    InvalidBatch(String),

    #[error("fixed-point iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("no giant component: {0}")]
    NoGiantComponent(String),

    #[error("path length undefined: {0}")]
    PathLengthUndefined(String),

    #[error("waiting-time prediction unsupported: {0}")]
    Unsupported(String),

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for FloodError {
    fn from(err: std::io::Error) -> Self {
        FloodError::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, FloodError>;
