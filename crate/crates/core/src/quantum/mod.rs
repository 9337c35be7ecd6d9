//! Dense quantum state engine.
//!
//! Statevectors up to [`MAX_STATEVECTOR_QUBITS`] qubits (enough for a Steane
//! block plus six syndrome ancillas) and density matrices up to
//! [`MAX_DENSITY_QUBITS`]. Larger systems go through Pauli frames.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

mod channel;
mod density;
mod gate;
mod pauli;
mod povm;
mod rng;
mod sampling;
mod state;

pub use channel::{depolarize, depolarize_kraus_form};
pub use density::DensityMatrix;
pub use gate::UnitaryGate;
pub use pauli::{Pauli, PauliString};
pub use povm::{povm_probabilities, Povm};
pub use rng::StreamRng;
pub use sampling::{
    haar_unitary, random_density_matrix, random_pure_state, state_pair_at_distance,
};
pub use state::{measure_projective, Measurement, StateVector};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

pub const MAX_STATEVECTOR_QUBITS: usize = 13;
pub const MAX_DENSITY_QUBITS: usize = 6;

/// Tolerance for structural invariants (normalisation, Hermiticity, PSD).
pub const STRUCTURAL_TOL: f64 = 1e-9;
/// Tolerance for exact algebraic identities.
pub const EXACT_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("{kind} capacity exceeded: {requested} qubits requested, at most {max} supported")]
    Capacity {
        kind: &'static str,
        requested: usize,
        max: usize,
    },
    #[error("gate {gate} acts on {arity} qubits but {targets} targets were given")]
    ArityMismatch {
        gate: String,
        arity: usize,
        targets: usize,
    },
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("qubit {0} listed twice in targets")]
    DuplicateTarget(usize),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    BasisIndexOutOfRange { index: usize, dim: usize },
    #[error("dimension {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),
    #[error("state norm {0} is not 1")]
    NotNormalized(f64),
    #[error("matrix is not unitary (defect {0:e})")]
    NotUnitary(f64),
    #[error("matrix is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    #[error("trace {0} is not 1")]
    BadTrace(f64),
    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("invalid POVM: {0}")]
    InvalidPovm(String),
    #[error("invalid Pauli letter {0:?}")]
    InvalidPauli(char),
    #[error("{name} = {value} is outside [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },
    #[error("trace distance {0} is outside (0, 1]")]
    InvalidDistance(f64),
    #[error("measurement of qubit {qubit} selected outcome {outcome} with zero probability")]
    ZeroProbabilityBranch { qubit: usize, outcome: u8 },
    #[error("qubit {qubit} is not in a basis state ({weight:e} weight on the other branch)")]
    NotProduct { qubit: usize, weight: f64 },
    #[error("could not reach trace distance {distance} after {attempts} attempts")]
    PairGeneration { distance: f64, attempts: usize },
}

/// `Tr|ρ - σ| / 2`, from the eigenvalues of the Hermitian difference.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64, QuantumError> {
    if rho.dim() != sigma.dim() {
        return Err(QuantumError::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let diff = rho.matrix() - sigma.matrix();
    let sum: f64 = density::hermitian_eigenvalues(&diff)
        .iter()
        .map(|v| v.abs())
        .sum();
    Ok((sum / 2.0).clamp(0.0, 1.0))
}

/// Kronecker product; qubit counts add.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Result<Self, QuantumError>;
}

impl Tensor for StateVector {
    fn tensor(&self, other: &Self) -> Result<Self, QuantumError> {
        let n = self.num_qubits() + other.num_qubits();
        if n > MAX_STATEVECTOR_QUBITS {
            return Err(QuantumError::Capacity {
                kind: "statevector",
                requested: n,
                max: MAX_STATEVECTOR_QUBITS,
            });
        }
        let amps = self
            .amplitudes()
            .iter()
            .flat_map(|a| other.amplitudes().iter().map(move |b| a * b))
            .collect();
        Ok(StateVector::from_parts_unchecked(n, amps))
    }
}

impl Tensor for DensityMatrix {
    fn tensor(&self, other: &Self) -> Result<Self, QuantumError> {
        let n = self.num_qubits() + other.num_qubits();
        if n > MAX_DENSITY_QUBITS {
            return Err(QuantumError::Capacity {
                kind: "density matrix",
                requested: n,
                max: MAX_DENSITY_QUBITS,
            });
        }
        Ok(DensityMatrix::from_matrix_unchecked(
            self.matrix().kronecker(other.matrix()),
        ))
    }
}

impl Tensor for UnitaryGate {
    fn tensor(&self, other: &Self) -> Result<Self, QuantumError> {
        let n = self.num_targets() + other.num_targets();
        if n > MAX_STATEVECTOR_QUBITS {
            return Err(QuantumError::Capacity {
                kind: "gate",
                requested: n,
                max: MAX_STATEVECTOR_QUBITS,
            });
        }
        Ok(UnitaryGate::from_parts_unchecked(
            format!("{}⊗{}", self.label(), other.label()),
            self.matrix().kronecker(other.matrix()),
        ))
    }
}
