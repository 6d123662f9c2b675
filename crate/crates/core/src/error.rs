use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("empty market: at least one horse is required")]
    EmptyMarket,

    #[error("probability at index {index} must be strictly positive, got {value}")]
    NonPositiveProbability { index: usize, value: f64 },

    #[error("odds at index {index} must be strictly positive, got {value}")]
    NonPositiveOdds { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("signal {index} has zero marginal probability")]
    ZeroSignalProbability { index: usize },

    #[error("invalid divergence order {0}: must be finite and positive")]
    InvalidOrder(f64),

    #[error("the conditional Rényi divergence is not defined at order 1")]
    UnsupportedOrder,

    #[error("beta = {beta} is outside the supported range {range}")]
    BetaOutOfRange { beta: f64, range: &'static str },

    #[error("some horse with positive probability receives no bet (index {index})")]
    ZeroBet { index: usize },

    #[error("not applicable: {0}")]
    NotApplicable(&'static str),

    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),

    #[error("grid with {points} points exceeds the limit of {limit}")]
    GridTooLarge { points: f64, limit: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("KKT conditions cannot be evaluated: {0}")]
    NotEvaluable(&'static str),
}
