use crate::analytics::NoiseScenario;

use super::PrivacyError;

pub const DEFAULT_DIM: u32 = 2;

fn check_d(d: f64) -> Result<(), PrivacyError> {
    if !(d > 0.0 && d <= 1.0) {
        return Err(PrivacyError::InvalidDistance(d));
    }
    Ok(())
}

fn check_dim(dim: u32) -> Result<(), PrivacyError> {
    if dim < 2 {
        return Err(PrivacyError::InvalidDimension(dim));
    }
    Ok(())
}

/// `ε = ln(1 + (1-p)/p · d·D)` for the depolarizing mechanism.
pub fn epsilon_from_p(p: f64, d: f64, dim: u32) -> Result<f64, PrivacyError> {
    if p == 0.0 {
        return Err(PrivacyError::InfiniteBudget);
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(PrivacyError::ProbabilityOutOfRange(p));
    }
    check_d(d)?;
    check_dim(dim)?;
    Ok(((1.0 - p) / p * d * dim as f64).ln_1p())
}

/// Inverse of [`epsilon_from_p`]: `p = dD / (e^ε - 1 + dD)`.
pub fn p_from_epsilon(epsilon: f64, d: f64, dim: u32) -> Result<f64, PrivacyError> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(PrivacyError::InvalidEpsilon(epsilon));
    }
    check_d(d)?;
    check_dim(dim)?;
    let dd = d * dim as f64;
    Ok(dd / (epsilon.exp_m1() + dd))
}

/// Budget of one noise scenario at a given trace distance and dimension.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrivacyReport {
    pub epsilon: f64,
    pub effective_p: f64,
    pub d: f64,
    pub dim: u32,
    pub scenario: NoiseScenario,
}

impl PrivacyReport {
    pub fn for_scenario(scenario: NoiseScenario, d: f64, dim: u32) -> Result<Self, PrivacyError> {
        let effective_p = scenario.effective_error().value;
        Ok(Self {
            epsilon: epsilon_from_p(effective_p, d, dim)?,
            effective_p,
            d,
            dim,
            scenario,
        })
    }
}
