use thiserror::Error;

/// Errors raised anywhere in the construction or verification pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("jet order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("jet order {have} too small, need at least {need}")]
    OrderExhausted { have: usize, need: usize },

    /// The leading value of a divisor fell below the pole guard.
    #[error("division by near-zero value {value:e} (pole guard {guard:e})")]
    Pole { value: f64, guard: f64 },

    #[error("domain violation in {op}: argument {value}")]
    Domain { op: &'static str, value: f64 },

    #[error("lower parameter q = {0} is zero or a negative integer")]
    InadmissibleLowerParameter(f64),

    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("transform mode mismatch: {0}")]
    ModeMismatch(String),

    /// Closed form is 0/0 or otherwise collapses for this input.
    #[error("degenerate closed form: {0}")]
    Degenerate(String),

    #[error("extremal state has a node on the evaluation grid near x = {0}")]
    NodeInGrid(f64),

    #[error("too few unguarded points: {valid} valid, {required} required")]
    TooFewPoints { valid: usize, required: usize },

    #[error("singular least-squares system (condition number {condition:e})")]
    SingularSystem { condition: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
