use thiserror::Error;

use crate::instance::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance:\n{0}")]
    Invalid(ValidationReport),

    #[error("instance too large: n = {n} exceeds the cap of {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed label string: {0}")]
    LabelShape(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("no fixpoint after {0} squaring iterations")]
    IterationBudgetExceeded(usize),

    #[error("connect did not converge within {0} outer iterations")]
    OuterBudgetExceeded(usize),

    #[error("oracle work budget of {0} states exhausted")]
    OracleBudget(u64),

    #[error("gap matrix or standard matrix violates the symmetry identities")]
    SymmetryViolation,

    #[error("method {method} needs a gap-symmetric variant, got {variant}")]
    IncompatibleMethod { method: String, variant: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("machine: {0}")]
    Machine(String),

    #[error("configuration space of {0} surface configurations exceeds the budget")]
    ConfigBudget(u128),

    #[error("pseudoforest invariant broken: {0}")]
    Pseudoforest(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by a resource or iteration budget rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::IterationBudgetExceeded(_)
                | Error::OuterBudgetExceeded(_)
                | Error::OracleBudget(_)
                | Error::ConfigBudget(_)
        )
    }
}
