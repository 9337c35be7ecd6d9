//! Phase-free Pauli strings in symplectic (x, z) form.

use std::fmt;
use std::str::FromStr;

use super::QuantumError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const NONTRIVIAL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn x_bit(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    pub fn z_bit(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    /// Product up to phase.
    pub fn compose(self, other: Pauli) -> Pauli {
        Pauli::from_bits(self.x_bit() ^ other.x_bit(), self.z_bit() ^ other.z_bit())
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Tensor product of single-qubit Paulis, phase discarded.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: Vec<bool>,
    z: Vec<bool>,
}

impl PauliString {
    pub fn identity(num_qubits: usize) -> Self {
        Self {
            x: vec![false; num_qubits],
            z: vec![false; num_qubits],
        }
    }

    pub fn single(num_qubits: usize, qubit: usize, pauli: Pauli) -> Result<Self, QuantumError> {
        let mut s = Self::identity(num_qubits);
        s.set(qubit, pauli)?;
        Ok(s)
    }

    pub fn from_bits(x: Vec<bool>, z: Vec<bool>) -> Result<Self, QuantumError> {
        if x.len() != z.len() {
            return Err(QuantumError::DimensionMismatch {
                left: x.len(),
                right: z.len(),
            });
        }
        Ok(Self { x, z })
    }

    pub fn from_paulis<I: IntoIterator<Item = Pauli>>(letters: I) -> Self {
        let (x, z) = letters.into_iter().map(|p| (p.x_bit(), p.z_bit())).unzip();
        Self { x, z }
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &[bool] {
        &self.x
    }

    pub fn z_bits(&self) -> &[bool] {
        &self.z
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        Pauli::from_bits(self.x[qubit], self.z[qubit])
    }

    pub fn set(&mut self, qubit: usize, pauli: Pauli) -> Result<(), QuantumError> {
        if qubit >= self.num_qubits() {
            return Err(QuantumError::QubitOutOfRange {
                qubit,
                num_qubits: self.num_qubits(),
            });
        }
        self.x[qubit] = pauli.x_bit();
        self.z[qubit] = pauli.z_bit();
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = Pauli> + '_ {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(&x, &z)| Pauli::from_bits(x, z))
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).filter(|(&x, &z)| x || z).count()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    /// Product up to phase. Both operands must act on the same number of qubits.
    pub fn compose(&self, other: &PauliString) -> Result<PauliString, QuantumError> {
        self.check_len(other)?;
        Ok(Self {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect(),
        })
    }

    pub fn commutes_with(&self, other: &PauliString) -> Result<bool, QuantumError> {
        self.check_len(other)?;
        let mut parity = false;
        for q in 0..self.num_qubits() {
            parity ^= (self.x[q] & other.z[q]) ^ (self.z[q] & other.x[q]);
        }
        Ok(!parity)
    }

    /// Sub-string on qubits `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> PauliString {
        Self {
            x: self.x[start..start + len].to_vec(),
            z: self.z[start..start + len].to_vec(),
        }
    }

    fn check_len(&self, other: &PauliString) -> Result<(), QuantumError> {
        if self.num_qubits() != other.num_qubits() {
            return Err(QuantumError::DimensionMismatch {
                left: self.num_qubits(),
                right: other.num_qubits(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.iter() {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = QuantumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' | '_' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(QuantumError::InvalidPauli(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(PauliString::from_paulis)
    }
}
