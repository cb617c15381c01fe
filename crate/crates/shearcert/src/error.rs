use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid filter order {0}: expected 1..=20")]
    InvalidOrder(usize),

    #[error("invalid mask of length {len} for order {order}")]
    InvalidMask { order: usize, len: usize },

    #[error("spectral factorization for order {order} left residual {residual:e}")]
    FactorizationResidual { order: usize, residual: f64 },

    #[error("cascade diverged at iteration {iteration}")]
    CascadeDivergence { iteration: u32 },

    #[error("level {got} is too low: at least {needed} required")]
    InsufficientLevel { needed: u32, got: u32 },

    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("denominator of {0} is even; sampling constants need odd denominators")]
    EvenDenominator(String),

    #[error("sampling constant {0} must be positive")]
    NonPositiveSampling(String),

    #[error("cannot parse {0:?} as an exact rational")]
    Parse(String),

    #[error("degenerate domain: {0}")]
    DegenerateDomain(String),

    #[error("function has no support above threshold {0:e}")]
    EmptySupport(f64),

    #[error("hypothesis failed: offsets {i} and {j} differ by {diff}, which lies on the lattice 2^-{exponent} Z")]
    HypothesisFailed {
        i: usize,
        j: usize,
        diff: String,
        exponent: u32,
    },

    #[error("index sets are not strictly nested at position {0}")]
    NotNested(usize),

    #[error("invalid quadrature levels {0}..={1}: need at least three levels")]
    QuadratureLevels(u32, u32),

    #[error("empty selection")]
    EmptySelection,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
