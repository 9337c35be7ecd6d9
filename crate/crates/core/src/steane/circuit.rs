//! Statevector-level Steane code: encoder, ancilla-based syndrome
//! extraction, correction and decoder.

use std::sync::OnceLock;

use crate::quantum::{PauliString, StateVector, StreamRng, Tensor, UnitaryGate};

use super::code::{decode_syndrome, StabilizerSet, Syndrome, SUPPORTS};
use super::{SteaneError, BLOCK_QUBITS};

/// Data qubit that carries the unencoded logical state.
const INPUT_QUBIT: usize = 3;
const ANCILLAS: usize = 6;
const CODE_SPACE_TOL: f64 = 1e-6;

#[derive(Clone, Copy)]
enum Step {
    H(usize),
    Cnot(usize, usize),
}

/// Encoder as a gate list. With the input on qubit 3, `CNOT 3->4, 3->5`
/// copies it onto the weight-3 representative `X3 X4 X5` of `X_L = X^7`; the
/// Hadamards on 0, 1, 2 and their fan-outs then generate the three X-type
/// stabilizers (qubit `j` is the only member of `SUPPORTS[j]` among 0..2).
fn encoder_steps() -> Vec<Step> {
    let mut steps = vec![Step::Cnot(INPUT_QUBIT, 4), Step::Cnot(INPUT_QUBIT, 5)];
    for (pivot, support) in SUPPORTS.iter().enumerate() {
        steps.push(Step::H(pivot));
        steps.extend(
            support
                .iter()
                .filter(|&&q| q != pivot)
                .map(|&q| Step::Cnot(pivot, q)),
        );
    }
    steps
}

fn gates() -> &'static (UnitaryGate, UnitaryGate, UnitaryGate) {
    static GATES: OnceLock<(UnitaryGate, UnitaryGate, UnitaryGate)> = OnceLock::new();
    GATES.get_or_init(|| (UnitaryGate::h(), UnitaryGate::cnot(), UnitaryGate::cz()))
}

fn run(state: &mut StateVector, steps: impl Iterator<Item = Step>) -> Result<(), SteaneError> {
    let (h, cnot, _) = gates();
    for step in steps {
        match step {
            Step::H(q) => state.apply_in_place(h, &[q])?,
            Step::Cnot(c, t) => state.apply_in_place(cnot, &[c, t])?,
        }
    }
    Ok(())
}

/// A 7-qubit Steane block together with the logical state it was encoded from.
#[derive(Clone, Debug, PartialEq)]
pub struct CodewordState {
    state: StateVector,
    origin: StateVector,
}

impl CodewordState {
    pub fn state(&self) -> &StateVector {
        &self.state
    }

    /// The unencoded logical state this block was built from.
    pub fn origin(&self) -> &StateVector {
        &self.origin
    }

    pub fn apply_error(&mut self, error: &PauliString) -> Result<(), SteaneError> {
        if error.num_qubits() != BLOCK_QUBITS {
            return Err(SteaneError::WrongLength {
                expected: BLOCK_QUBITS,
                got: error.num_qubits(),
            });
        }
        self.state.apply_pauli(error)?;
        Ok(())
    }

    pub fn with_error(&self, error: &PauliString) -> Result<Self, SteaneError> {
        let mut out = self.clone();
        out.apply_error(error)?;
        Ok(out)
    }

    /// `⟨N0⟩, ⟨N1⟩, ⟨N2⟩, ⟨M0⟩, ⟨M1⟩, ⟨M2⟩`.
    pub fn stabilizer_expectations(&self) -> Result<[f64; 6], SteaneError> {
        let mut out = [0.0; 6];
        for (slot, g) in out.iter_mut().zip(StabilizerSet::steane().generators()) {
            *slot = self.state.expectation(&g)?;
        }
        Ok(out)
    }

    pub fn in_code_space(&self, tol: f64) -> Result<bool, SteaneError> {
        Ok(self
            .stabilizer_expectations()?
            .iter()
            .all(|&e| e >= 1.0 - tol))
    }

    /// Overlap with the noiseless encoding of [`Self::origin`].
    pub fn logical_fidelity(&self) -> Result<f64, SteaneError> {
        let reference = encode(&self.origin)?;
        Ok(reference.state.fidelity(&self.state)?)
    }
}

/// Encodes one logical qubit into a Steane block. `X_L = X^7`, `Z_L = Z^7`.
pub fn encode(logical: &StateVector) -> Result<CodewordState, SteaneError> {
    if logical.num_qubits() != 1 {
        return Err(SteaneError::WrongLength {
            expected: 1,
            got: logical.num_qubits(),
        });
    }
    let mut state = StateVector::zero(INPUT_QUBIT)?
        .tensor(logical)?
        .tensor(&StateVector::zero(BLOCK_QUBITS - INPUT_QUBIT - 1)?)?;
    run(&mut state, encoder_steps().into_iter())?;
    Ok(CodewordState {
        state,
        origin: logical.clone(),
    })
}

/// Inverse of [`encode`]. Fails if the block is not in the code space.
pub fn decode(codeword: &CodewordState) -> Result<StateVector, SteaneError> {
    let expectations = codeword.stabilizer_expectations()?;
    let min = expectations.iter().copied().fold(f64::INFINITY, f64::min);
    if min < 1.0 - CODE_SPACE_TOL {
        return Err(SteaneError::NotInCodeSpace {
            min_expectation: min,
        });
    }
    let mut state = codeword.state.clone();
    run(&mut state, encoder_steps().into_iter().rev())?;
    for q in (0..BLOCK_QUBITS).rev().filter(|&q| q != INPUT_QUBIT) {
        state = state.remove_qubit(q, 0)?;
    }
    Ok(state)
}

/// Appends six ancillas, measures `N0..N2` then `M0..M2` with the
/// H / controlled-stabilizer / H pattern, and returns the syndrome with the
/// ancillas removed. Measurement outcome 0 is eigenvalue `+1`.
pub fn extract_syndrome_circuit(
    codeword: &CodewordState,
    rng: &mut StreamRng,
) -> Result<(Syndrome, CodewordState), SteaneError> {
    if codeword.state.num_qubits() != BLOCK_QUBITS {
        return Err(SteaneError::WrongLength {
            expected: BLOCK_QUBITS,
            got: codeword.state.num_qubits(),
        });
    }
    let (h, cnot, cz) = gates();
    let mut state = codeword.state.tensor(&StateVector::zero(ANCILLAS)?)?;
    let set = StabilizerSet::steane();
    let checks = set
        .z_supports
        .iter()
        .map(|s| (s, cz))
        .chain(set.x_supports.iter().map(|s| (s, cnot)));
    for (j, (support, controlled)) in checks.enumerate() {
        let ancilla = BLOCK_QUBITS + j;
        state.apply_in_place(h, &[ancilla])?;
        for &q in support {
            state.apply_in_place(controlled, &[ancilla, q])?;
        }
        state.apply_in_place(h, &[ancilla])?;
    }
    let mut eigen = [1i8; ANCILLAS];
    let mut outcomes = [0u8; ANCILLAS];
    for j in 0..ANCILLAS {
        let m = state.measure(BLOCK_QUBITS + j, rng)?;
        eigen[j] = m.eigenvalue;
        outcomes[j] = m.outcome;
        state = m.collapsed;
    }
    for j in (0..ANCILLAS).rev() {
        state = state.remove_qubit(BLOCK_QUBITS + j, outcomes[j])?;
    }
    let syndrome = Syndrome::new(
        [eigen[0], eigen[1], eigen[2]],
        [eigen[3], eigen[4], eigen[5]],
    )?;
    Ok((
        syndrome,
        CodewordState {
            state,
            origin: codeword.origin.clone(),
        },
    ))
}

/// Detection followed by lookup-table correction.
pub fn qec_cycle(noisy: &CodewordState, rng: &mut StreamRng) -> Result<CodewordState, SteaneError> {
    let (syndrome, mut measured) = extract_syndrome_circuit(noisy, rng)?;
    let correction = decode_syndrome(&syndrome);
    measured.apply_error(&correction.to_pauli_string())?;
    Ok(measured)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_1_SQRT_2;

    use super::*;
    use crate::quantum::{Pauli, C64};

    fn plus() -> StateVector {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        StateVector::from_amplitudes(vec![h, h]).unwrap()
    }

    fn z_logical() -> PauliString {
        PauliString::from_paulis([Pauli::Z; 7])
    }

    #[test]
    fn encoded_basis_states() {
        let zero = encode(&StateVector::basis(1, 0).unwrap()).unwrap();
        assert!(zero.in_code_space(1e-9).unwrap());
        assert!((zero.state().expectation(&z_logical()).unwrap() - 1.0).abs() < 1e-9);
        let one = encode(&StateVector::basis(1, 1).unwrap()).unwrap();
        assert!(one.in_code_space(1e-9).unwrap());
        assert!((one.state().expectation(&z_logical()).unwrap() + 1.0).abs() < 1e-9);
    }

    #[test]
    fn logical_x_is_transversal() {
        let zero = encode(&StateVector::basis(1, 0).unwrap()).unwrap();
        let one = encode(&StateVector::basis(1, 1).unwrap()).unwrap();
        let flipped = zero
            .with_error(&PauliString::from_paulis([Pauli::X; 7]))
            .unwrap();
        assert!((flipped.state().fidelity(one.state()).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn decode_round_trips() {
        for psi in [StateVector::basis(1, 0).unwrap(), plus()] {
            let back = decode(&encode(&psi).unwrap()).unwrap();
            assert!((back.fidelity(&psi).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn decode_rejects_errors() {
        let cw = encode(&plus())
            .unwrap()
            .with_error(&"IIXIIII".parse().unwrap())
            .unwrap();
        assert!(matches!(
            decode(&cw),
            Err(SteaneError::NotInCodeSpace { .. })
        ));
    }

    #[test]
    fn circuit_syndrome_examples() {
        let cw = encode(&plus()).unwrap();
        let mut rng = StreamRng::new(0, 0);
        let (s, _) = extract_syndrome_circuit(&cw, &mut rng).unwrap();
        assert!(s.is_trivial());
        let (s, _) = extract_syndrome_circuit(
            &cw.with_error(&"XIIIIII".parse().unwrap()).unwrap(),
            &mut rng,
        )
        .unwrap();
        assert_eq!((s.n(), s.m()), ([-1, 1, 1], [1, 1, 1]));
        let (s, _) = extract_syndrome_circuit(
            &cw.with_error(&"IIIIIIY".parse().unwrap()).unwrap(),
            &mut rng,
        )
        .unwrap();
        assert_eq!((s.n(), s.m()), ([-1, -1, -1], [-1, -1, -1]));
    }

    #[test]
    fn qec_cycle_recovers_single_error() {
        let cw = encode(&plus()).unwrap();
        let mut rng = StreamRng::new(1, 0);
        let fixed = qec_cycle(
            &cw.with_error(&"IIXIIII".parse().unwrap()).unwrap(),
            &mut rng,
        )
        .unwrap();
        assert!((fixed.logical_fidelity().unwrap() - 1.0).abs() < 1e-9);
        let untouched = qec_cycle(&cw, &mut rng).unwrap();
        assert!((untouched.state().fidelity(cw.state()).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn double_error_still_yields_valid_state() {
        let cw = encode(&plus()).unwrap();
        let mut rng = StreamRng::new(2, 0);
        let out = qec_cycle(
            &cw.with_error(&"XIIIIZI".parse().unwrap()).unwrap(),
            &mut rng,
        )
        .unwrap();
        assert!((out.state().norm_sqr() - 1.0).abs() < 1e-9);
        assert!(out.in_code_space(1e-9).unwrap());
    }

    #[test]
    fn encode_rejects_multi_qubit_input() {
        assert!(encode(&StateVector::zero(2).unwrap()).is_err());
    }
}
