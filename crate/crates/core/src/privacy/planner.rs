//! Choosing how many gates to correct, and at which concatenation level, so
//! that the circuit's budget reaches a target.

use crate::analytics::{qec_threshold, NoiseScenario};

use super::{epsilon_from_p, PrivacyError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanWarning {
    /// `p` is at or above the correction threshold, so adding corrections
    /// raises the error rate; only `m = 0` lowers nothing.
    AboveThreshold,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QecPlan {
    pub n: u32,
    pub m: u32,
    pub level: u32,
    pub achieved_epsilon: f64,
    pub attainable: bool,
    pub warning: Option<PlanWarning>,
}

/// ε of `n` gates with `m` of them corrected at `level`. An effective error
/// that underflows to zero counts as an unbounded budget.
pub fn scenario_epsilon(
    n: u32,
    m: u32,
    p: f64,
    level: u32,
    d: f64,
    dim: u32,
) -> Result<f64, PrivacyError> {
    let effective = NoiseScenario::new(n, p, m, level)?.effective_error().value;
    match epsilon_from_p(effective, d, dim) {
        Err(PrivacyError::InfiniteBudget) => Ok(f64::INFINITY),
        other => other,
    }
}

/// Scans `level = 1..=max_level` (outer) and `m = 0..=n` (inner) and returns
/// the first combination whose ε meets `target_epsilon`. Lower levels win
/// over more corrected gates, since each level costs a factor of seven in
/// physical qubits. If nothing qualifies the plan carries the largest ε
/// seen and `attainable = false`.
pub fn plan_qec(
    target_epsilon: f64,
    n: u32,
    p: f64,
    d: f64,
    dim: u32,
    max_level: u32,
) -> Result<QecPlan, PrivacyError> {
    if target_epsilon.is_nan() || target_epsilon < 0.0 {
        return Err(PrivacyError::InvalidEpsilon(target_epsilon));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(PrivacyError::ProbabilityOutOfRange(p));
    }
    if max_level == 0 {
        return Err(PrivacyError::Analytics(
            crate::analytics::AnalyticsError::InvalidLevel(0),
        ));
    }
    let warning = (p >= qec_threshold()).then_some(PlanWarning::AboveThreshold);
    let mut best: Option<(u32, u32, f64)> = None;
    for level in 1..=max_level {
        for m in 0..=n {
            let eps = scenario_epsilon(n, m, p, level, d, dim)?;
            if eps >= target_epsilon {
                return Ok(QecPlan {
                    n,
                    m,
                    level,
                    achieved_epsilon: eps,
                    attainable: true,
                    warning,
                });
            }
            if best.is_none_or(|(_, _, b)| eps > b) {
                best = Some((level, m, eps));
            }
        }
    }
    let (level, m, eps) = best.expect("at least one candidate is scanned");
    Ok(QecPlan {
        n,
        m,
        level,
        achieved_epsilon: eps,
        attainable: false,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_target_needs_nothing() {
        let plan = plan_qec(0.0, 3, 0.03, 0.5, 2, 2).unwrap();
        assert_eq!((plan.m, plan.level, plan.attainable), (0, 1, true));
    }

    #[test]
    fn two_gates_target_three() {
        let plan = plan_qec(3.0, 2, 0.03, 0.5, 2, 3).unwrap();
        assert_eq!((plan.m, plan.level), (1, 1));
        assert!((plan.achieved_epsilon - 3.067).abs() < 1e-3);
        assert!(scenario_epsilon(2, 0, 0.03, 1, 0.5, 2).unwrap() < 3.0);
    }

    #[test]
    fn single_gate_needs_second_level() {
        let plan = plan_qec(5.0, 1, 0.03, 0.5, 2, 2).unwrap();
        assert_eq!((plan.m, plan.level), (1, 2));
        assert!((plan.achieved_epsilon - 5.147).abs() < 1e-2);
        assert!(scenario_epsilon(1, 1, 0.03, 1, 0.5, 2).unwrap() < 5.0);
    }

    #[test]
    fn unattainable_reports_best() {
        let plan = plan_qec(50.0, 2, 0.03, 0.5, 2, 2).unwrap();
        assert!(!plan.attainable);
        assert_eq!((plan.m, plan.level), (2, 2));
        assert!(plan.achieved_epsilon < 50.0);
    }

    #[test]
    fn above_threshold_warns() {
        let plan = plan_qec(1.0, 2, 0.2, 0.5, 2, 2).unwrap();
        assert_eq!(plan.warning, Some(PlanWarning::AboveThreshold));
        assert!(plan_qec(1.0, 2, 0.03, 0.5, 2, 2).unwrap().warning.is_none());
    }

    #[test]
    fn domain_errors() {
        assert!(plan_qec(-1.0, 2, 0.03, 0.5, 2, 2).is_err());
        assert!(plan_qec(1.0, 2, 0.0, 0.5, 2, 2).is_err());
        assert!(plan_qec(1.0, 2, 1.0, 0.5, 2, 2).is_err());
        assert!(plan_qec(1.0, 0, 0.03, 0.5, 2, 2).is_err());
        assert!(plan_qec(1.0, 2, 0.03, 0.5, 2, 0).is_err());
    }
}
