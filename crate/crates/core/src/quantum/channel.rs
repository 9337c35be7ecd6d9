//! Depolarizing noise in its two parameterisations.

use super::density::DensityMatrix;
use super::gate::UnitaryGate;
use super::QuantumError;

fn check_probability(name: &'static str, value: f64) -> Result<(), QuantumError> {
    if !(0.0..=1.0).contains(&value) || value.is_nan() {
        return Err(QuantumError::InvalidProbability { name, value });
    }
    Ok(())
}

/// `p I/D + (1 - p) ρ`, restricted to `subsystem` when given (the whole
/// register otherwise).
pub fn depolarize(
    rho: &DensityMatrix,
    p: f64,
    subsystem: Option<&[usize]>,
) -> Result<DensityMatrix, QuantumError> {
    check_probability("p", p)?;
    let all: Vec<usize>;
    let qubits = match subsystem {
        Some(s) => {
            for (i, &q) in s.iter().enumerate() {
                if q >= rho.num_qubits() {
                    return Err(QuantumError::QubitOutOfRange {
                        qubit: q,
                        num_qubits: rho.num_qubits(),
                    });
                }
                if s[..i].contains(&q) {
                    return Err(QuantumError::DuplicateTarget(q));
                }
            }
            s
        }
        None => {
            all = (0..rho.num_qubits()).collect();
            &all
        }
    };
    if qubits.is_empty() || p == 0.0 {
        return Ok(rho.clone());
    }
    let mixed = DensityMatrix::from_matrix_unchecked(rho.replace_with_mixed(qubits));
    Ok(rho.mix(&mixed, p))
}

/// Pauli-twirl form on one qubit: `(1 - q) ρ + (q/3)(XρX + YρY + ZρZ)`.
/// Equals `depolarize(ρ, 4q/3)` on that qubit.
pub fn depolarize_kraus_form(
    rho: &DensityMatrix,
    q: f64,
    target: usize,
) -> Result<DensityMatrix, QuantumError> {
    check_probability("q", q)?;
    if target >= rho.num_qubits() {
        return Err(QuantumError::QubitOutOfRange {
            qubit: target,
            num_qubits: rho.num_qubits(),
        });
    }
    let targets = [target];
    let mut out = rho.matrix().scale(1.0 - q);
    for g in [UnitaryGate::x(), UnitaryGate::y(), UnitaryGate::z()] {
        out += rho
            .conjugate_by(g.matrix(), &targets)
            .matrix()
            .scale(q / 3.0);
    }
    Ok(DensityMatrix::from_matrix_unchecked(out))
}
