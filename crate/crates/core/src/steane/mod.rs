//! The Steane [[7,1,3]] code, both as a statevector circuit and as a
//! classical lookup decoder over Pauli frames.

use thiserror::Error;

use crate::quantum::QuantumError;

mod circuit;
mod code;

pub use circuit::{decode, encode, extract_syndrome_circuit, qec_cycle, CodewordState};
pub use code::{
    block_residual, concatenated_decode_classical, decode_syndrome, extract_syndrome_classical,
    Correction, StabilizerSet, Syndrome, SUPPORTS,
};

pub const BLOCK_QUBITS: usize = 7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SteaneError {
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error("expected {expected} qubits, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("syndrome eigenvalue {0} is not +1 or -1")]
    InvalidEigenvalue(i8),
    #[error("state is outside the code space (smallest stabilizer expectation {min_expectation})")]
    NotInCodeSpace { min_expectation: f64 },
    #[error("concatenation level {0} is not supported")]
    InvalidLevel(u32),
    #[error("error string of length {len} does not match 7^{level}")]
    NotPowerOfSeven { len: usize, level: u32 },
}
