//! Sampled falsification check of the ε bound: draw state pairs at a given
//! trace distance, depolarize both, and compare outcome-event probabilities
//! under random POVMs.

use rayon::prelude::*;

use crate::quantum::{depolarize, state_pair_at_distance, DensityMatrix, Povm, StreamRng};

use super::{epsilon_from_p, PrivacyError};

/// Probabilities below this are not used as a ratio denominator.
pub const UNDERFLOW_FLOOR: f64 = 1e-15;
/// Allowed excess of the observed log-ratio over ε.
pub const DP_SLACK: f64 = 1e-6;
/// POVMs with at most this many outcomes have every event checked.
const EXHAUSTIVE_OUTCOMES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DpCheck {
    pub max_observed_log_ratio: f64,
    pub bound_epsilon: f64,
    pub pass: bool,
    /// Event ratios dropped because a probability fell below [`UNDERFLOW_FLOOR`].
    pub skipped: u64,
    pub evaluated: u64,
}

#[derive(Clone, Copy, Default)]
struct Tally {
    max: f64,
    skipped: u64,
    evaluated: u64,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        Tally {
            max: self.max.max(other.max),
            skipped: self.skipped + other.skipped,
            evaluated: self.evaluated + other.evaluated,
        }
    }

    fn record(&mut self, a: f64, b: f64) {
        if a < UNDERFLOW_FLOOR || b < UNDERFLOW_FLOOR {
            self.skipped += 1;
            return;
        }
        self.evaluated += 1;
        self.max = self.max.max((a / b).ln().abs());
    }
}

/// Events checked for a POVM with `k` outcomes: every nonempty proper subset
/// when `k` is small, otherwise each outcome and its complement.
fn events(k: usize) -> Vec<Vec<usize>> {
    if k <= EXHAUSTIVE_OUTCOMES {
        (1..(1usize << k) - 1)
            .map(|mask| (0..k).filter(|i| mask >> i & 1 == 1).collect())
            .collect()
    } else {
        (0..k)
            .flat_map(|i| [vec![i], (0..k).filter(|&j| j != i).collect()])
            .collect()
    }
}

fn check_pair(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    povms: &[Povm],
    tally: &mut Tally,
) -> Result<(), PrivacyError> {
    for povm in povms {
        let pr = povm.probabilities(rho)?;
        let ps = povm.probabilities(sigma)?;
        for event in events(povm.len()) {
            let a: f64 = event.iter().map(|&i| pr[i]).sum();
            let b: f64 = event.iter().map(|&i| ps[i]).sum();
            tally.record(a, b);
        }
    }
    Ok(())
}

/// Pair `i` uses the stream `rng.fork(i)`, so the result does not depend on
/// how pairs are scheduled. Even-numbered POVMs of a pair are Haar-random
/// projective measurements, odd-numbered ones random two-outcome effects.
/// Both ratio directions are checked.
pub fn verify_dp_empirical(
    p: f64,
    d: f64,
    dim: u32,
    num_pairs: usize,
    num_povms: usize,
    rng: &StreamRng,
) -> Result<DpCheck, PrivacyError> {
    let bound_epsilon = epsilon_from_p(p, d, dim)?;
    if !dim.is_power_of_two() {
        return Err(PrivacyError::DimensionNotQubits(dim));
    }
    let num_qubits = dim.trailing_zeros() as usize;
    let tally = (0..num_pairs)
        .into_par_iter()
        .map(|i| -> Result<Tally, PrivacyError> {
            let mut local = rng.fork(i as u64);
            let (rho, sigma) = state_pair_at_distance(num_qubits, d, &mut local)?;
            let rho = depolarize(&rho, p, None)?;
            let sigma = depolarize(&sigma, p, None)?;
            let povms = (0..num_povms)
                .map(|k| {
                    if k % 2 == 0 {
                        Povm::haar_projective(dim as usize, &mut local)
                    } else {
                        Povm::random_two_outcome(dim as usize, &mut local)
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mut tally = Tally::default();
            check_pair(&rho, &sigma, &povms, &mut tally)?;
            Ok(tally)
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    Ok(DpCheck {
        max_observed_log_ratio: tally.max,
        bound_epsilon,
        pass: tally.max <= bound_epsilon + DP_SLACK,
        skipped: tally.skipped,
        evaluated: tally.evaluated,
    })
}

/// Largest event log-ratio between `rho` and `sigma` after depolarizing both
/// with `p`, under one fixed POVM.
pub fn max_log_ratio(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    p: f64,
    povm: &Povm,
) -> Result<f64, PrivacyError> {
    let mut tally = Tally::default();
    check_pair(
        &depolarize(rho, p, None)?,
        &depolarize(sigma, p, None)?,
        std::slice::from_ref(povm),
        &mut tally,
    )?;
    Ok(tally.max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn event_enumeration() {
        assert_eq!(events(2), vec![vec![0], vec![1]]);
        assert_eq!(events(3).len(), 6);
        assert_eq!(events(13).len(), 26);
    }

    #[test]
    fn fully_mixed_output_has_zero_ratio() {
        let check = verify_dp_empirical(1.0, 0.5, 2, 20, 4, &StreamRng::new(3, 0)).unwrap();
        assert!(check.max_observed_log_ratio.abs() < 1e-12);
        assert_eq!(check.bound_epsilon, 0.0);
        assert!(check.pass);
    }

    #[test]
    fn computational_basis_pair() {
        let rho = DensityMatrix::basis(1, 0).unwrap();
        let sigma = DensityMatrix::maximally_mixed(1).unwrap();
        let povm = Povm::computational_basis(1).unwrap();
        let ratio = max_log_ratio(&rho, &sigma, 0.03, &povm).unwrap();
        let eps = epsilon_from_p(0.03, 0.5, 2).unwrap();
        assert!((ratio - eps).abs() < 1e-9);
        assert!(ratio <= 3.5066 + DP_SLACK);
    }

    #[test]
    fn bound_holds_on_small_run() {
        let check = verify_dp_empirical(0.03, 0.5, 2, 50, 6, &StreamRng::new(7, 0)).unwrap();
        assert!(check.pass, "{check:?}");
        assert!(check.evaluated > 0);
        assert!(check.max_observed_log_ratio > 0.0);
    }

    #[test]
    fn deterministic_for_seed() {
        let a = verify_dp_empirical(0.1, 0.7, 4, 16, 3, &StreamRng::new(11, 0)).unwrap();
        let b = verify_dp_empirical(0.1, 0.7, 4, 16, 3, &StreamRng::new(11, 0)).unwrap();
        assert_eq!(a, b);
        assert!(a.pass);
    }

    #[test]
    fn rejects_non_qubit_dimension() {
        assert_eq!(
            verify_dp_empirical(0.1, 0.5, 3, 1, 1, &StreamRng::new(0, 0)),
            Err(PrivacyError::DimensionNotQubits(3))
        );
    }
}
