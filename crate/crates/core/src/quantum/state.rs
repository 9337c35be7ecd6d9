//! Pure states and the shared gate-application kernel.
//!
//! Qubit 0 is the most significant bit of a basis index, so `|0⟩ ⊗ |1⟩`
//! is basis index 1 of a 2-qubit register.

use super::gate::UnitaryGate;
use super::pauli::PauliString;
use super::rng::StreamRng;
use super::{CMatrix, DensityMatrix, QuantumError, C64, MAX_STATEVECTOR_QUBITS, STRUCTURAL_TOL};

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

/// Result of a single-qubit computational-basis measurement.
#[derive(Clone, Debug)]
pub struct Measurement {
    pub outcome: u8,
    /// `+1` for outcome 0, `-1` for outcome 1.
    pub eigenvalue: i8,
    pub collapsed: StateVector,
}

pub(crate) fn bit_of(num_qubits: usize, qubit: usize) -> usize {
    1 << (num_qubits - 1 - qubit)
}

pub(crate) fn check_targets(
    num_qubits: usize,
    gate: &UnitaryGate,
    targets: &[usize],
) -> Result<(), QuantumError> {
    if gate.num_targets() != targets.len() {
        return Err(QuantumError::ArityMismatch {
            gate: gate.label().to_string(),
            arity: gate.num_targets(),
            targets: targets.len(),
        });
    }
    for (i, &t) in targets.iter().enumerate() {
        if t >= num_qubits {
            return Err(QuantumError::QubitOutOfRange {
                qubit: t,
                num_qubits,
            });
        }
        if targets[..i].contains(&t) {
            return Err(QuantumError::DuplicateTarget(t));
        }
    }
    Ok(())
}

/// Applies `matrix` to the qubits `targets` of a `num_qubits` register stored
/// in `amps`. Targets must already be validated.
pub(crate) fn apply_matrix(
    amps: &mut [C64],
    num_qubits: usize,
    matrix: &CMatrix,
    targets: &[usize],
) {
    match targets {
        [t] => return apply_one(amps, matrix, bit_of(num_qubits, *t)),
        [a, b] => return apply_two(amps, matrix, bit_of(num_qubits, *a), bit_of(num_qubits, *b)),
        _ => {}
    }
    let k = targets.len();
    let local_dim = 1 << k;
    let offsets: Vec<usize> = (0..local_dim)
        .map(|l| {
            targets
                .iter()
                .enumerate()
                .filter(|(b, _)| l & (1 << (k - 1 - b)) != 0)
                .map(|(_, &t)| bit_of(num_qubits, t))
                .sum()
        })
        .collect();
    let mask: usize = offsets[local_dim - 1];
    // Controlled and Pauli gates are mostly zeros; keep only nonzero entries.
    let rows: Vec<Vec<(usize, C64)>> = (0..local_dim)
        .map(|r| {
            (0..local_dim)
                .map(|c| (c, matrix[(r, c)]))
                .filter(|(_, v)| v.norm_sqr() != 0.0)
                .collect()
        })
        .collect();
    let mut gathered = vec![C64::new(0.0, 0.0); local_dim];
    let mut base = 0usize;
    while base < amps.len() {
        for (slot, off) in gathered.iter_mut().zip(&offsets) {
            *slot = amps[base + off];
        }
        for (row, off) in rows.iter().zip(&offsets) {
            amps[base + off] = row.iter().map(|&(c, v)| v * gathered[c]).sum();
        }
        // Next index with every target bit clear.
        base = ((base | mask) + 1) & !mask;
    }
}

fn apply_one(amps: &mut [C64], matrix: &CMatrix, bit: usize) {
    let m = [
        matrix[(0, 0)],
        matrix[(0, 1)],
        matrix[(1, 0)],
        matrix[(1, 1)],
    ];
    let mut i = 0usize;
    while i < amps.len() {
        let (a0, a1) = (amps[i], amps[i | bit]);
        amps[i] = m[0] * a0 + m[1] * a1;
        amps[i | bit] = m[2] * a0 + m[3] * a1;
        i = ((i | bit) + 1) & !bit;
    }
}

fn apply_two(amps: &mut [C64], matrix: &CMatrix, hi: usize, lo: usize) {
    let mut m = [[C64::new(0.0, 0.0); 4]; 4];
    for (r, row) in m.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = matrix[(r, c)];
        }
    }
    let offsets = [0, lo, hi, hi | lo];
    let mask = hi | lo;
    let zero = C64::new(0.0, 0.0);
    let single: Vec<(usize, C64)> = m
        .iter()
        .filter_map(|row| {
            let mut nz = row.iter().enumerate().filter(|(_, v)| **v != zero);
            match (nz.next(), nz.next()) {
                (Some((c, v)), None) => Some((c, *v)),
                _ => None,
            }
        })
        .collect();
    let mut base = 0usize;
    if let [s0, s1, s2, s3] = single[..] {
        // One nonzero per row (CNOT, CZ, SWAP, ...): permute and phase.
        let rows = [s0, s1, s2, s3];
        while base < amps.len() {
            let g = offsets.map(|o| amps[base | o]);
            for (&(c, v), &o) in rows.iter().zip(&offsets) {
                amps[base | o] = v * g[c];
            }
            base = ((base | mask) + 1) & !mask;
        }
        return;
    }
    while base < amps.len() {
        let g = offsets.map(|o| amps[base | o]);
        for (row, &o) in m.iter().zip(&offsets) {
            amps[base | o] = row[0] * g[0] + row[1] * g[1] + row[2] * g[2] + row[3] * g[3];
        }
        base = ((base | mask) + 1) & !mask;
    }
}

/// Applies a phase-free Pauli string (Y as `iXZ`) in place.
pub(crate) fn apply_pauli_string(amps: &mut [C64], pauli: &PauliString) {
    let n = pauli.num_qubits();
    let (mut xmask, mut zmask) = (0usize, 0usize);
    for q in 0..n {
        if pauli.x_bits()[q] {
            xmask |= bit_of(n, q);
        }
        if pauli.z_bits()[q] {
            zmask |= bit_of(n, q);
        }
    }
    let global = match (xmask & zmask).count_ones() % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::i(),
        2 => C64::new(-1.0, 0.0),
        _ => -C64::i(),
    };
    let old = amps.to_vec();
    for (i, a) in old.into_iter().enumerate() {
        let sign = if (i & zmask).count_ones() % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        amps[i ^ xmask] = global * a * sign;
    }
}

impl StateVector {
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self, QuantumError> {
        check_capacity(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(QuantumError::BasisIndexOutOfRange { index, dim });
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    pub fn zero(num_qubits: usize) -> Result<Self, QuantumError> {
        Self::basis(num_qubits, 0)
    }

    /// Validates length and normalisation (within 1e-9).
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self, QuantumError> {
        let num_qubits = qubits_for_len(amplitudes.len())?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > STRUCTURAL_TOL {
            return Err(QuantumError::NotNormalized(norm));
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self, QuantumError> {
        let num_qubits = qubits_for_len(amplitudes.len())?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm <= f64::MIN_POSITIVE {
            return Err(QuantumError::NotNormalized(0.0));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64, QuantumError> {
        if self.dim() != other.dim() {
            return Err(QuantumError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn fidelity(&self, other: &StateVector) -> Result<f64, QuantumError> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn to_density_matrix(&self) -> Result<DensityMatrix, QuantumError> {
        DensityMatrix::from_pure(self)
    }

    pub fn apply_in_place(
        &mut self,
        gate: &UnitaryGate,
        targets: &[usize],
    ) -> Result<(), QuantumError> {
        check_targets(self.num_qubits, gate, targets)?;
        apply_matrix(
            &mut self.amplitudes,
            self.num_qubits,
            gate.matrix(),
            targets,
        );
        Ok(())
    }

    pub fn apply(&self, gate: &UnitaryGate, targets: &[usize]) -> Result<Self, QuantumError> {
        let mut out = self.clone();
        out.apply_in_place(gate, targets)?;
        Ok(out)
    }

    pub fn apply_pauli(&mut self, pauli: &PauliString) -> Result<(), QuantumError> {
        if pauli.num_qubits() != self.num_qubits {
            return Err(QuantumError::DimensionMismatch {
                left: self.num_qubits,
                right: pauli.num_qubits(),
            });
        }
        apply_pauli_string(&mut self.amplitudes, pauli);
        Ok(())
    }

    /// `⟨ψ|P|ψ⟩` for a phase-free Pauli string; real because P is Hermitian.
    pub fn expectation(&self, pauli: &PauliString) -> Result<f64, QuantumError> {
        let mut moved = self.clone();
        moved.apply_pauli(pauli)?;
        Ok(self.inner(&moved)?.re)
    }

    pub fn probability_of_one(&self, qubit: usize) -> Result<f64, QuantumError> {
        self.check_qubit(qubit)?;
        let b = bit_of(self.num_qubits, qubit);
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & b != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Samples a computational-basis measurement of `qubit` with Born
    /// probabilities and returns the renormalised post-measurement state.
    pub fn measure(&self, qubit: usize, rng: &mut StreamRng) -> Result<Measurement, QuantumError> {
        let p1 = self.probability_of_one(qubit)?;
        let p0 = self.norm_sqr() - p1;
        let outcome = u8::from(rng.uniform() < p1);
        let branch = if outcome == 1 { p1 } else { p0 };
        if branch <= 1e-300 {
            return Err(QuantumError::ZeroProbabilityBranch { qubit, outcome });
        }
        let b = bit_of(self.num_qubits, qubit);
        let scale = 1.0 / branch.sqrt();
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if u8::from(i & b != 0) == outcome {
                    a * scale
                } else {
                    C64::new(0.0, 0.0)
                }
            })
            .collect();
        Ok(Measurement {
            outcome,
            eigenvalue: if outcome == 0 { 1 } else { -1 },
            collapsed: StateVector {
                num_qubits: self.num_qubits,
                amplitudes,
            },
        })
    }

    /// Drops `qubit`, which must already be in basis state `value`
    /// (e.g. right after measuring it). Weight on the other branch above 1e-9
    /// is reported as an entangled-qubit error.
    pub fn remove_qubit(&self, qubit: usize, value: u8) -> Result<StateVector, QuantumError> {
        self.check_qubit(qubit)?;
        if self.num_qubits == 1 {
            return Err(QuantumError::Capacity {
                kind: "statevector",
                requested: 0,
                max: MAX_STATEVECTOR_QUBITS,
            });
        }
        let b = bit_of(self.num_qubits, qubit);
        let keep_set = value == 1;
        let mut leaked = 0.0;
        let mut amplitudes = Vec::with_capacity(self.dim() / 2);
        for (i, a) in self.amplitudes.iter().enumerate() {
            if (i & b != 0) == keep_set {
                amplitudes.push(*a);
            } else {
                leaked += a.norm_sqr();
            }
        }
        if leaked > STRUCTURAL_TOL {
            return Err(QuantumError::NotProduct {
                qubit,
                weight: leaked,
            });
        }
        StateVector::normalized(amplitudes)
    }

    fn check_qubit(&self, qubit: usize) -> Result<(), QuantumError> {
        if qubit >= self.num_qubits {
            return Err(QuantumError::QubitOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    pub(crate) fn from_parts_unchecked(num_qubits: usize, amplitudes: Vec<C64>) -> Self {
        Self {
            num_qubits,
            amplitudes,
        }
    }
}

/// Free-function form of [`StateVector::measure`].
pub fn measure_projective(
    state: &StateVector,
    qubit: usize,
    rng: &mut StreamRng,
) -> Result<Measurement, QuantumError> {
    state.measure(qubit, rng)
}

fn check_capacity(num_qubits: usize) -> Result<(), QuantumError> {
    if num_qubits == 0 || num_qubits > MAX_STATEVECTOR_QUBITS {
        return Err(QuantumError::Capacity {
            kind: "statevector",
            requested: num_qubits,
            max: MAX_STATEVECTOR_QUBITS,
        });
    }
    Ok(())
}

fn qubits_for_len(len: usize) -> Result<usize, QuantumError> {
    if len < 2 || !len.is_power_of_two() {
        return Err(QuantumError::NotPowerOfTwo(len));
    }
    let n = len.trailing_zeros() as usize;
    check_capacity(n)?;
    Ok(n)
}
