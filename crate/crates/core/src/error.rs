use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("not an abelian family: commutator norm {norm:e} exceeds {tol:e}")]
    NotAbelian { norm: f64, tol: f64 },

    #[error("not hermitian: asymmetry {asym:e} exceeds {tol:e}")]
    NotHermitian { asym: f64, tol: f64 },

    #[error("diagonalization failed: achieved residual {residual:e}")]
    DiagonalizationFailed { residual: f64 },

    #[error("not a projection partition: {0}")]
    NotPartition(String),

    #[error("partition not uniform")]
    PartitionNotUniform,

    #[error("not majorized")]
    NotMajorized,

    #[error("measure mismatch: {0}")]
    MeasureMismatch(String),

    #[error("map is not doubly stochastic: {0}")]
    NotDoublyStochasticMap(String),

    #[error("not doubly stochastic: {0}")]
    NotDoublyStochastic(String),

    #[error("numerically sub-stochastic: residual mass {residual:e} without a perfect matching")]
    SubStochastic { residual: f64 },

    #[error("rank mismatch between matched blocks: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("post-condition violated: {what} residual {residual:e} exceeds {tol:e}")]
    PostCondition { what: &'static str, residual: f64, tol: f64 },

    #[error("resolution cap: m = {m} exceeds cap {cap}")]
    ResolutionCap { m: usize, cap: usize },

    #[error("no uniform refinement at this r: {0}")]
    NoUniformRefinement(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("lp solver: {0}")]
    Lp(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
