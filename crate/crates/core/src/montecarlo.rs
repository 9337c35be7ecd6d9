//! Monte Carlo estimates of Steane-protected logical error rates, checked
//! against the closed forms in [`crate::analytics`].
//!
//! Trials run in fixed chunks. Chunk `c` draws its errors from
//! `StreamRng::new(seed, 0).fork(2c)` and its measurement outcomes from
//! `fork(2c + 1)`, so reports do not depend on thread scheduling.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::analytics::{concatenated_error, corrected_error};
use crate::quantum::{Pauli, PauliString, StateVector, StreamRng, C64};
use crate::steane::{
    block_residual, concatenated_decode_classical, encode, qec_cycle, CodewordState, SteaneError,
    BLOCK_QUBITS,
};

pub const CHUNK_TRIALS: u64 = 4096;
/// Largest trial count accepted by the statevector backend.
pub const MAX_CIRCUIT_TRIALS: u64 = 100_000;
pub const MAX_LEVEL: u32 = 5;
/// Post-correction fidelity below `1 - FIDELITY_TOL` counts as a logical error.
pub const FIDELITY_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MonteCarloError {
    #[error("error rate {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("at least one trial is required")]
    NoTrials,
    #[error("circuit backend is limited to {max} trials, got {trials}")]
    CircuitBudget { trials: u64, max: u64 },
    #[error("concatenation level must be in 1..={max}, got {level}")]
    InvalidLevel { level: u32, max: u32 },
    #[error(transparent)]
    Steane(#[from] SteaneError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    /// 13-qubit statevector simulation of encoding, detection and correction.
    Circuit,
    /// Classical tracking of the sampled Pauli error through the decoder.
    PauliFrame,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Circuit => "circuit",
            Backend::PauliFrame => "pauli_frame",
        })
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "circuit" => Ok(Backend::Circuit),
            "pauli_frame" | "pauli-frame" | "frame" => Ok(Backend::PauliFrame),
            other => Err(format!(
                "unknown backend '{other}' (expected circuit or pauli_frame)"
            )),
        }
    }
}

/// `failures` counts trials whose sampled error is uncorrectable by weight
/// (two or more faulty qubits in a block, recursively for concatenated
/// codes). `logical_failures` counts trials that actually end in a logical
/// error after decoding, which is never larger.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialReport {
    pub trials: u64,
    pub failures: u64,
    pub logical_failures: u64,
    pub estimated_error: f64,
    pub std_error: f64,
    pub analytic_error: f64,
    pub z_score: f64,
    pub seed: u64,
    pub p: f64,
    pub level: u32,
    pub backend: Backend,
}

impl TrialReport {
    fn new(
        counts: Counts,
        trials: u64,
        analytic: f64,
        seed: u64,
        p: f64,
        level: u32,
        backend: Backend,
    ) -> Self {
        let n = trials as f64;
        let q = counts.failures as f64 / n;
        let std_error = (q * (1.0 - q) / n).sqrt();
        let sigma = if std_error > 0.0 {
            std_error
        } else {
            (analytic * (1.0 - analytic) / n).sqrt()
        };
        let z_score = if sigma > 0.0 {
            (q - analytic) / sigma
        } else {
            0.0
        };
        Self {
            trials,
            failures: counts.failures,
            logical_failures: counts.logical,
            estimated_error: q,
            std_error,
            analytic_error: analytic,
            z_score,
            seed,
            p,
            level,
            backend,
        }
    }

    pub fn logical_error_rate(&self) -> f64 {
        self.logical_failures as f64 / self.trials as f64
    }
}

/// Each qubit independently stays clean with probability `1 - p`, otherwise
/// takes X, Y or Z uniformly.
pub fn sample_pauli_error<R: Rng + ?Sized>(p: f64, num_qubits: usize, rng: &mut R) -> PauliString {
    let mut out = PauliString::identity(num_qubits);
    for q in 0..num_qubits {
        let u: f64 = rng.random();
        if u < p {
            let letter = Pauli::NONTRIVIAL[rng.random_range(0..3)];
            out.set(q, letter).expect("qubit is in range");
        }
    }
    out
}

#[derive(Clone, Copy, Default)]
struct Counts {
    failures: u64,
    logical: u64,
}

impl Counts {
    fn add(self, o: Counts) -> Counts {
        Counts {
            failures: self.failures + o.failures,
            logical: self.logical + o.logical,
        }
    }
}

fn check_inputs(p: f64, trials: u64) -> Result<(), MonteCarloError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(MonteCarloError::ProbabilityOutOfRange(p));
    }
    if trials == 0 {
        return Err(MonteCarloError::NoTrials);
    }
    Ok(())
}

fn run_chunks<F>(trials: u64, seed: u64, chunk: F) -> Result<Counts, MonteCarloError>
where
    F: Fn(u64, &mut StreamRng, &mut StreamRng) -> Result<Counts, MonteCarloError> + Sync,
{
    let root = StreamRng::new(seed, 0);
    let num_chunks = trials.div_ceil(CHUNK_TRIALS);
    (0..num_chunks)
        .into_par_iter()
        .map(|c| {
            let len = CHUNK_TRIALS.min(trials - c * CHUNK_TRIALS);
            let mut errors = root.fork(2 * c);
            let mut measurements = root.fork(2 * c + 1);
            chunk(len, &mut errors, &mut measurements)
        })
        .try_reduce(Counts::default, |a, b| Ok(a.add(b)))
}

/// Whether each group of seven fails, given which of its members failed:
/// a group fails with two or more failing members.
fn weight_failures(failed: &[bool]) -> Vec<bool> {
    failed
        .chunks(BLOCK_QUBITS)
        .map(|g| g.iter().filter(|&&f| f).count() >= 2)
        .collect()
}

fn recursive_weight_failure(error: &PauliString) -> bool {
    let mut failed: Vec<bool> = error.iter().map(|p| p != Pauli::I).collect();
    while failed.len() > 1 {
        failed = weight_failures(&failed);
    }
    failed[0]
}

/// The logical state used by the circuit backend. Its Bloch vector has no
/// zero component, so every logical Pauli lowers the fidelity.
fn probe_state() -> StateVector {
    let (theta, phi) = (1.1_f64, 0.7_f64);
    let a = C64::new((theta / 2.0).cos(), 0.0);
    let b = C64::from_polar((theta / 2.0).sin(), phi);
    StateVector::from_amplitudes(vec![a, b]).unwrap_or_else(|_| {
        StateVector::from_amplitudes(vec![C64::new(FRAC_1_SQRT_2, 0.0); 2])
            .expect("|+> is normalized")
    })
}

fn circuit_trial(
    reference: &CodewordState,
    error: &PauliString,
    rng: &mut StreamRng,
) -> Result<bool, MonteCarloError> {
    let corrected = qec_cycle(&reference.with_error(error)?, rng)?;
    Ok(corrected.logical_fidelity()? < 1.0 - FIDELITY_TOL)
}

/// Level-1 trials on one Steane block.
pub fn run_steane_trials(
    p: f64,
    trials: u64,
    seed: u64,
    backend: Backend,
) -> Result<TrialReport, MonteCarloError> {
    check_inputs(p, trials)?;
    let analytic = corrected_error(p).map_err(|_| MonteCarloError::ProbabilityOutOfRange(p))?;
    let counts = match backend {
        Backend::PauliFrame => frame_counts(p, 1, trials, seed)?,
        Backend::Circuit => {
            if trials > MAX_CIRCUIT_TRIALS {
                return Err(MonteCarloError::CircuitBudget {
                    trials,
                    max: MAX_CIRCUIT_TRIALS,
                });
            }
            let reference = encode(&probe_state())?;
            run_chunks(trials, seed, |len, errors, measurements| {
                let mut counts = Counts::default();
                for _ in 0..len {
                    let error = sample_pauli_error(p, BLOCK_QUBITS, errors);
                    counts.failures += u64::from(error.weight() >= 2);
                    counts.logical += u64::from(circuit_trial(&reference, &error, measurements)?);
                }
                Ok(counts)
            })?
        }
    };
    Ok(TrialReport::new(
        counts, trials, analytic, seed, p, 1, backend,
    ))
}

fn frame_counts(p: f64, level: u32, trials: u64, seed: u64) -> Result<Counts, MonteCarloError> {
    let num_qubits = BLOCK_QUBITS.pow(level);
    run_chunks(trials, seed, |len, errors, _| {
        let mut counts = Counts::default();
        for _ in 0..len {
            let error = sample_pauli_error(p, num_qubits, errors);
            counts.failures += u64::from(recursive_weight_failure(&error));
            let residual = if level == 1 {
                block_residual(&error)?
            } else {
                concatenated_decode_classical(&error, level)?.get(0)
            };
            counts.logical += u64::from(residual != Pauli::I);
        }
        Ok(counts)
    })
}

/// Pauli-frame trials on `7^level` qubits. At level 1 this is identical to
/// [`run_steane_trials`] with [`Backend::PauliFrame`].
pub fn run_concatenated_trials(
    p: f64,
    level: u32,
    trials: u64,
    seed: u64,
) -> Result<TrialReport, MonteCarloError> {
    check_inputs(p, trials)?;
    if level == 0 || level > MAX_LEVEL {
        return Err(MonteCarloError::InvalidLevel {
            level,
            max: MAX_LEVEL,
        });
    }
    let analytic =
        concatenated_error(p, level).map_err(|_| MonteCarloError::ProbabilityOutOfRange(p))?;
    let counts = frame_counts(p, level, trials, seed)?;
    Ok(TrialReport::new(
        counts,
        trials,
        analytic,
        seed,
        p,
        level,
        Backend::PauliFrame,
    ))
}

/// Two-proportion z statistic with pooled variance.
pub fn two_proportion_z(a: &TrialReport, b: &TrialReport) -> f64 {
    let (na, nb) = (a.trials as f64, b.trials as f64);
    let pooled = (a.failures + b.failures) as f64 / (na + nb);
    let sigma = (pooled * (1.0 - pooled) * (1.0 / na + 1.0 / nb)).sqrt();
    if sigma > 0.0 {
        (a.estimated_error - b.estimated_error) / sigma
    } else {
        0.0
    }
}
