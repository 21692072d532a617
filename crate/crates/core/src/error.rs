use thiserror::Error;

use crate::model::Outcome;
use crate::optimize::OptimizationResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("positivity violated at {outcome}: entry {value:e} is negative")]
    PositivityViolation { outcome: Outcome, value: f64 },

    #[error("table entries sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },

    #[error("non-finite value {value} in {field}")]
    NonFinite { field: String, value: f64 },

    #[error("degenerate model: both pre-selection outcomes have zero probability")]
    DegenerateModel,

    #[error("{param} = {value} is outside its domain: {reason}")]
    Domain {
        param: &'static str,
        value: f64,
        reason: String,
    },

    #[error("budget exhausted before every deterministic start was refined (best margin so far {:.6})", .0.best_margin)]
    BudgetExhausted(Box<OptimizationResult>),

    #[error("invalid model file: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(param: &'static str, value: f64, reason: impl Into<String>) -> Self {
        Error::Domain {
            param,
            value,
            reason: reason.into(),
        }
    }
}
