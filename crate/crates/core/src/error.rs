use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Default ceiling on the memory any single bit-table computation may request.
pub const DEFAULT_MEMORY_BUDGET: u64 = 2 << 30;

/// Environment variable that overrides [`DEFAULT_MEMORY_BUDGET`] (bytes).
pub const MEMORY_BUDGET_ENV: &str = "MONOSUM_MEMORY_BUDGET";

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("range [{lo}, {hi}] lies outside the tracked cap {cap}")]
    RangeOutsideCap { lo: u64, hi: u64, cap: u64 },

    /// The growth hypothesis `a_i <= y + sum_{j<i} a_j` failed at the 1-based `index`.
    #[error("extension condition violated at addition {index}: {addition} > {limit}")]
    ConditionViolated { index: usize, addition: u64, limit: u128 },

    #[error("memory budget exceeded: {requested} bytes requested, budget is {budget} bytes")]
    MemoryBudget { requested: u128, budget: u64 },

    #[error("{n} is outside the represented range (limit {limit})")]
    OutOfRange { n: u64, limit: u64 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

/// Memory budget in bytes, honouring [`MEMORY_BUDGET_ENV`] when it parses.
pub fn memory_budget_from_env() -> u64 {
    std::env::var(MEMORY_BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MEMORY_BUDGET)
}
