//! Closed-form error-rate algebra for single-qubit gate circuits protected
//! by (possibly concatenated) Steane codes.
//!
//! `p` is the per-physical-qubit error probability. A Steane block survives
//! when at most one of its seven qubits errs; gates are independent, so
//! accuracies multiply.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticsError {
    #[error("error rate {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("gate count must be at least 1")]
    NoGates,
    #[error("{m} corrected gates exceed the circuit's {n} gates")]
    TooManyCorrected { n: u32, m: u32 },
    #[error("concatenation level must be at least 1, got {0}")]
    InvalidLevel(u32),
}

fn check_p(p: f64) -> Result<(), AnalyticsError> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(AnalyticsError::ProbabilityOutOfRange(p));
    }
    Ok(())
}

/// A circuit of `n` single-qubit gates, each with depolarizing error `p`,
/// of which `m` are followed by a level-`level` Steane correction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseScenario {
    pub n: u32,
    pub p: f64,
    pub m: u32,
    pub level: u32,
}

impl NoiseScenario {
    pub fn new(n: u32, p: f64, m: u32, level: u32) -> Result<Self, AnalyticsError> {
        check_p(p)?;
        if n == 0 {
            return Err(AnalyticsError::NoGates);
        }
        if m > n {
            return Err(AnalyticsError::TooManyCorrected { n, m });
        }
        if level == 0 {
            return Err(AnalyticsError::InvalidLevel(level));
        }
        Ok(Self { n, p, m, level })
    }

    /// Single uncorrected gate.
    pub fn single_gate(p: f64) -> Result<Self, AnalyticsError> {
        Self::new(1, p, 0, 1)
    }

    pub fn effective_error(&self) -> EffectiveError {
        EffectiveError {
            value: selective_value(self.n, self.m, self.p, self.level),
            scenario: *self,
        }
    }
}

/// Circuit-level error rate, expressible as one global depolarizing channel
/// at the end of the circuit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveError {
    pub value: f64,
    pub scenario: NoiseScenario,
}

/// `(1-p)^7 + 7 p (1-p)^6`: probability that at most one of seven qubits errs.
pub fn corrected_accuracy(p: f64) -> Result<f64, AnalyticsError> {
    check_p(p)?;
    let q = 1.0 - p;
    Ok(q.powi(7) + 7.0 * p * q.powi(6))
}

/// `1 - corrected_accuracy(p)`, summed as the binomial tail of two or more
/// errors so that tiny values keep full relative precision.
pub fn corrected_error(p: f64) -> Result<f64, AnalyticsError> {
    check_p(p)?;
    Ok(two_or_more_of_seven(p))
}

fn two_or_more_of_seven(p: f64) -> f64 {
    const BINOM7: [f64; 8] = [1.0, 7.0, 21.0, 35.0, 35.0, 21.0, 7.0, 1.0];
    let q = 1.0 - p;
    let tail: f64 = (2..=7)
        .map(|k| BINOM7[k] * p.powi(k as i32) * q.powi(7 - k as i32))
        .sum();
    tail.min(1.0)
}

/// Root in `(0, 1)` of `corrected_error(p) = p`, by bisection on `(0, 0.5)`
/// to 1e-12. Below it one round of correction lowers the error rate.
pub fn qec_threshold() -> f64 {
    let f = |p: f64| two_or_more_of_seven(p) - p;
    let (mut lo, mut hi) = (1e-6, 0.5);
    debug_assert!(f(lo) < 0.0 && f(hi) > 0.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `(1-p)^5 (1+6p) - 1`, which vanishes exactly at the threshold.
pub fn threshold_factorization_residual(p: f64) -> f64 {
    (1.0 - p).powi(5) * (1.0 + 6.0 * p) - 1.0
}

/// `1 - c'^2`: two gates, each corrected.
pub fn error_two_gates_both_qec(p: f64) -> Result<f64, AnalyticsError> {
    let pc = corrected_error(p)?;
    Ok(pc * (2.0 - pc))
}

/// `1 - c' (1-p)`: two gates, one corrected. Position does not matter.
pub fn error_two_gates_one_qec(p: f64) -> Result<f64, AnalyticsError> {
    let pc = corrected_error(p)?;
    Ok(pc + p - pc * p)
}

/// `1 - (1-p)^n`: `n` uncorrected gates folded into one global channel.
pub fn error_global(n: u32, p: f64) -> Result<f64, AnalyticsError> {
    check_p(p)?;
    if n == 0 {
        return Err(AnalyticsError::NoGates);
    }
    Ok(survival_complement(&[(n, p)]))
}

/// `1 - (1 - p_l)^m (1-p)^(n-m)` where `p_l` is the level-`level`
/// concatenated error of each corrected gate.
pub fn error_selective(
    n: u32,
    m: u32,
    p: f64,
    level: u32,
) -> Result<EffectiveError, AnalyticsError> {
    Ok(NoiseScenario::new(n, p, m, level)?.effective_error())
}

fn selective_value(n: u32, m: u32, p: f64, level: u32) -> f64 {
    let pc = iterate(p, level);
    survival_complement(&[(m, pc), (n - m, p)])
}

/// `1 - Π (1 - p_i)^{k_i}` via `expm1`/`ln_1p`.
fn survival_complement(factors: &[(u32, f64)]) -> f64 {
    if factors.iter().any(|&(k, q)| k > 0 && q >= 1.0) {
        return 1.0;
    }
    let log_survival: f64 = factors
        .iter()
        .filter(|&&(k, _)| k > 0)
        .map(|&(k, q)| k as f64 * (-q).ln_1p())
        .sum();
    (-log_survival.exp_m1()).clamp(0.0, 1.0)
}

fn iterate(p: f64, level: u32) -> f64 {
    (0..level).fold(p, |acc, _| two_or_more_of_seven(acc))
}

/// `p_0 = p`, `p_l = corrected_error(p_{l-1})`. Level 0 returns `p`.
pub fn concatenated_error(p: f64, level: u32) -> Result<f64, AnalyticsError> {
    check_p(p)?;
    Ok(iterate(p, level))
}
