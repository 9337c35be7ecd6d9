//! Privacy budgets of the depolarizing mechanism, their inversion, and the
//! QEC planner that tunes a circuit's budget toward a target.

use thiserror::Error;

use crate::analytics::AnalyticsError;
use crate::quantum::QuantumError;

mod budget;
mod planner;
mod verify;

pub use budget::{epsilon_from_p, p_from_epsilon, PrivacyReport, DEFAULT_DIM};
pub use planner::{plan_qec, scenario_epsilon, PlanWarning, QecPlan};
pub use verify::{max_log_ratio, verify_dp_empirical, DpCheck, DP_SLACK, UNDERFLOW_FLOOR};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PrivacyError {
    #[error("p = 0 leaves the output noiseless, so no finite budget exists")]
    InfiniteBudget,
    #[error("error rate {0} is outside the valid range")]
    ProbabilityOutOfRange(f64),
    #[error("trace distance {0} is outside (0, 1]")]
    InvalidDistance(f64),
    #[error("dimension {0} must be at least 2")]
    InvalidDimension(u32),
    #[error("dimension {0} is not a power of two")]
    DimensionNotQubits(u32),
    #[error("epsilon {0} must be finite and non-negative")]
    InvalidEpsilon(f64),
    #[error(transparent)]
    Analytics(#[from] AnalyticsError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}
