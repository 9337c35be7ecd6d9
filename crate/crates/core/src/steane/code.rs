//! Classical (symplectic) side of the Steane code: stabilizers, syndromes,
//! the lookup decoder and block-level logical residuals.

use std::fmt;

use crate::quantum::{Pauli, PauliString};

use super::{SteaneError, BLOCK_QUBITS};

/// Supports of the three generators of each type. Qubit `i` belongs to
/// `SUPPORTS[j]` iff bit `j` of its signature is set, giving every qubit a
/// distinct nonzero 3-bit signature.
pub const SUPPORTS: [[usize; 4]; 3] = [[0, 4, 5, 6], [1, 3, 5, 6], [2, 3, 4, 6]];

/// The six Steane generators. The Z-type checks (`N0..N2`) detect bit flips;
/// the X-type checks (`M0..M2`) detect phase flips. The code is self-dual, so
/// both types share [`SUPPORTS`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerSet {
    pub z_supports: [[usize; 4]; 3],
    pub x_supports: [[usize; 4]; 3],
}

impl Default for StabilizerSet {
    fn default() -> Self {
        Self::steane()
    }
}

impl StabilizerSet {
    pub fn steane() -> Self {
        Self {
            z_supports: SUPPORTS,
            x_supports: SUPPORTS,
        }
    }

    /// `[N0, N1, N2, M0, M1, M2]` as Pauli strings on 7 qubits.
    pub fn generators(&self) -> Vec<PauliString> {
        let build = |support: &[usize; 4], p: Pauli| {
            PauliString::from_paulis((0..BLOCK_QUBITS).map(|q| {
                if support.contains(&q) {
                    p
                } else {
                    Pauli::I
                }
            }))
        };
        self.z_supports
            .iter()
            .map(|s| build(s, Pauli::Z))
            .chain(self.x_supports.iter().map(|s| build(s, Pauli::X)))
            .collect()
    }

    /// Bit `j` set iff `qubit` is in support `j`.
    pub fn signature(&self, qubit: usize) -> u8 {
        self.z_supports
            .iter()
            .enumerate()
            .filter(|(_, s)| s.contains(&qubit))
            .fold(0, |acc, (j, _)| acc | (1 << j))
    }

    pub fn qubit_for_signature(&self, bits: u8) -> Option<usize> {
        (bits != 0)
            .then(|| (0..BLOCK_QUBITS).find(|&q| self.signature(q) == bits))
            .flatten()
    }
}

/// Eigenvalues `(N0, N1, N2)` and `(M0, M1, M2)`, each `+1` or `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Syndrome {
    n: [i8; 3],
    m: [i8; 3],
}

impl Syndrome {
    pub fn new(n: [i8; 3], m: [i8; 3]) -> Result<Self, SteaneError> {
        if let Some(&bad) = n.iter().chain(&m).find(|v| v.abs() != 1) {
            return Err(SteaneError::InvalidEigenvalue(bad));
        }
        Ok(Self { n, m })
    }

    pub fn trivial() -> Self {
        Self {
            n: [1; 3],
            m: [1; 3],
        }
    }

    pub(crate) fn from_bits(n_bits: u8, m_bits: u8) -> Self {
        let eig = |bits: u8, j: usize| if bits & (1 << j) != 0 { -1 } else { 1 };
        Self {
            n: [eig(n_bits, 0), eig(n_bits, 1), eig(n_bits, 2)],
            m: [eig(m_bits, 0), eig(m_bits, 1), eig(m_bits, 2)],
        }
    }

    pub fn n(&self) -> [i8; 3] {
        self.n
    }

    pub fn m(&self) -> [i8; 3] {
        self.m
    }

    /// Bit `j` set iff `N_j = -1`.
    pub fn n_bits(&self) -> u8 {
        bits_of(&self.n)
    }

    /// Bit `j` set iff `M_j = -1`.
    pub fn m_bits(&self) -> u8 {
        bits_of(&self.m)
    }

    pub fn is_trivial(&self) -> bool {
        self.n_bits() == 0 && self.m_bits() == 0
    }
}

fn bits_of(e: &[i8; 3]) -> u8 {
    e.iter()
        .enumerate()
        .filter(|(_, &v)| v == -1)
        .fold(0, |acc, (j, _)| acc | (1 << j))
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [n0, n1, n2] = self.n;
        let [m0, m1, m2] = self.m;
        write!(f, "({n0},{n1},{n2},{m0},{m1},{m2})")
    }
}

/// Recovery operation chosen by [`decode_syndrome`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Correction {
    None,
    Single {
        qubit: usize,
        pauli: Pauli,
    },
    /// `N` and `M` point at different qubits. Beyond the single-error
    /// guarantee: X on one, Z on the other.
    Pair {
        x_qubit: usize,
        z_qubit: usize,
    },
}

impl Correction {
    pub fn to_pauli_string(&self) -> PauliString {
        let mut p = PauliString::identity(BLOCK_QUBITS);
        // Indices come from the lookup table and are always < 7.
        match *self {
            Correction::None => {}
            Correction::Single { qubit, pauli } => p.set(qubit, pauli).expect("qubit < 7"),
            Correction::Pair { x_qubit, z_qubit } => {
                p.set(x_qubit, Pauli::X).expect("qubit < 7");
                p.set(z_qubit, Pauli::Z).expect("qubit < 7");
            }
        }
        p
    }
}

fn check_block(error: &PauliString) -> Result<(), SteaneError> {
    if error.num_qubits() != BLOCK_QUBITS {
        return Err(SteaneError::WrongLength {
            expected: BLOCK_QUBITS,
            got: error.num_qubits(),
        });
    }
    Ok(())
}

/// `N_j = -1` iff the X-part overlaps support `j` an odd number of times;
/// `M_j` likewise for the Z-part.
pub fn extract_syndrome_classical(error: &PauliString) -> Result<Syndrome, SteaneError> {
    check_block(error)?;
    let parity_bits = |part: &[bool]| {
        SUPPORTS.iter().enumerate().fold(0u8, |acc, (j, s)| {
            let odd = s.iter().filter(|&&q| part[q]).count() % 2 == 1;
            acc | (u8::from(odd) << j)
        })
    };
    Ok(Syndrome::from_bits(
        parity_bits(error.x_bits()),
        parity_bits(error.z_bits()),
    ))
}

/// Inverse lookup of the syndrome table. Total: every syndrome maps to some
/// correction.
pub fn decode_syndrome(s: &Syndrome) -> Correction {
    let set = StabilizerSet::steane();
    let xq = set.qubit_for_signature(s.n_bits());
    let zq = set.qubit_for_signature(s.m_bits());
    match (xq, zq) {
        (None, None) => Correction::None,
        (Some(q), None) => Correction::Single {
            qubit: q,
            pauli: Pauli::X,
        },
        (None, Some(q)) => Correction::Single {
            qubit: q,
            pauli: Pauli::Z,
        },
        (Some(a), Some(b)) if a == b => Correction::Single {
            qubit: a,
            pauli: Pauli::Y,
        },
        (Some(x_qubit), Some(z_qubit)) => Correction::Pair { x_qubit, z_qubit },
    }
}

/// Logical Pauli left on one block after syndrome decoding and correction.
pub fn block_residual(error: &PauliString) -> Result<Pauli, SteaneError> {
    let correction = decode_syndrome(&extract_syndrome_classical(error)?).to_pauli_string();
    let residual = error.compose(&correction)?;
    // Residual commutes with every generator; X_L = X^7 and Z_L = Z^7 have odd
    // weight while the stabilizers have even weight, so parity reads it off.
    let x_odd = residual.x_bits().iter().filter(|&&b| b).count() % 2 == 1;
    let z_odd = residual.z_bits().iter().filter(|&&b| b).count() % 2 == 1;
    Ok(Pauli::from_bits(x_odd, z_odd))
}

/// Hierarchical decoding over `7^level` qubits. Consecutive groups of seven
/// are decoded into their logical residuals, which form the error string of
/// the next level up, until one qubit remains.
pub fn concatenated_decode_classical(
    error: &PauliString,
    level: u32,
) -> Result<PauliString, SteaneError> {
    if level == 0 {
        return Err(SteaneError::InvalidLevel(level));
    }
    let expected = BLOCK_QUBITS
        .checked_pow(level)
        .ok_or(SteaneError::InvalidLevel(level))?;
    if error.num_qubits() != expected {
        return Err(SteaneError::NotPowerOfSeven {
            len: error.num_qubits(),
            level,
        });
    }
    let mut current = error.clone();
    while current.num_qubits() > 1 {
        let residuals = (0..current.num_qubits() / BLOCK_QUBITS)
            .map(|b| block_residual(&current.slice(b * BLOCK_QUBITS, BLOCK_QUBITS)))
            .collect::<Result<Vec<_>, _>>()?;
        current = PauliString::from_paulis(residuals);
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signatures_match_membership() {
        let set = StabilizerSet::steane();
        // q0=100, q1=010, q2=001, q3=011, q4=101, q5=110, q6=111 with N0 as the leading digit
        let expected = [0b001, 0b010, 0b100, 0b110, 0b101, 0b011, 0b111];
        for (q, &e) in expected.iter().enumerate() {
            assert_eq!(set.signature(q), e, "qubit {q}");
            assert_eq!(set.qubit_for_signature(e), Some(q));
        }
        assert_eq!(set.qubit_for_signature(0), None);
    }

    #[test]
    fn generators_commute() {
        let gens = StabilizerSet::steane().generators();
        for a in &gens {
            for b in &gens {
                assert!(a.commutes_with(b).unwrap());
            }
        }
    }

    #[test]
    fn syndrome_rejects_non_unit() {
        assert!(matches!(
            Syndrome::new([1, 0, 1], [1, 1, 1]),
            Err(SteaneError::InvalidEigenvalue(0))
        ));
    }

    #[test]
    fn classical_examples() {
        let s = extract_syndrome_classical(&PauliString::identity(7)).unwrap();
        assert!(s.is_trivial());
        let z3 = PauliString::single(7, 3, Pauli::Z).unwrap();
        let s = extract_syndrome_classical(&z3).unwrap();
        assert_eq!((s.n(), s.m()), ([1, 1, 1], [1, -1, -1]));
        let x5 = PauliString::single(7, 5, Pauli::X).unwrap();
        assert_eq!(extract_syndrome_classical(&x5).unwrap().n(), [-1, -1, 1]);
        assert!(extract_syndrome_classical(&PauliString::identity(6)).is_err());
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode_syndrome(&Syndrome::trivial()), Correction::None);
        let s = Syndrome::new([1, -1, 1], [1, 1, 1]).unwrap();
        assert_eq!(
            decode_syndrome(&s),
            Correction::Single {
                qubit: 1,
                pauli: Pauli::X
            }
        );
        let s = Syndrome::new([-1, 1, -1], [-1, 1, -1]).unwrap();
        assert_eq!(
            decode_syndrome(&s),
            Correction::Single {
                qubit: 4,
                pauli: Pauli::Y
            }
        );
        // N -> qubit 0, M -> qubit 5
        let s = Syndrome::new([-1, 1, 1], [-1, -1, 1]).unwrap();
        assert_eq!(
            decode_syndrome(&s),
            Correction::Pair {
                x_qubit: 0,
                z_qubit: 5
            }
        );
    }

    #[test]
    fn residuals() {
        assert_eq!(block_residual(&PauliString::identity(7)).unwrap(), Pauli::I);
        assert_eq!(
            block_residual(&"XIIIIII".parse().unwrap()).unwrap(),
            Pauli::I
        );
        // two bit flips always mis-correct into a logical X
        assert_eq!(
            block_residual(&"XXIIIII".parse().unwrap()).unwrap(),
            Pauli::X
        );
        // X and Z on different qubits decode correctly
        assert_eq!(
            block_residual(&"XIIIIZI".parse().unwrap()).unwrap(),
            Pauli::I
        );
        assert_eq!(
            block_residual(&"XXXXXXX".parse().unwrap()).unwrap(),
            Pauli::X
        );
        assert_eq!(
            block_residual(&"YYYYYYY".parse().unwrap()).unwrap(),
            Pauli::Y
        );
    }

    #[test]
    fn concatenated_examples() {
        for level in 1..=3 {
            let id = PauliString::identity(7usize.pow(level));
            assert!(concatenated_decode_classical(&id, level)
                .unwrap()
                .is_identity());
        }
        for q in 0..49 {
            let e = PauliString::single(49, q, Pauli::X).unwrap();
            assert!(concatenated_decode_classical(&e, 2).unwrap().is_identity());
        }
        // two X in inner block 3: that block flips logically, outer code fixes it
        let mut e = PauliString::identity(49);
        e.set(21, Pauli::X).unwrap();
        e.set(23, Pauli::X).unwrap();
        assert_eq!(block_residual(&e.slice(21, 7)).unwrap(), Pauli::X);
        assert!(concatenated_decode_classical(&e, 2).unwrap().is_identity());
        // the same pattern in two inner blocks defeats level 2
        e.set(0, Pauli::X).unwrap();
        e.set(1, Pauli::X).unwrap();
        assert_eq!(
            concatenated_decode_classical(&e, 2).unwrap().get(0),
            Pauli::X
        );
    }

    #[test]
    fn concatenated_level_one_matches_block() {
        let e: PauliString = "XZIIYII".parse().unwrap();
        assert_eq!(
            concatenated_decode_classical(&e, 1).unwrap().get(0),
            block_residual(&e).unwrap()
        );
    }

    #[test]
    fn concatenated_length_errors() {
        assert!(matches!(
            concatenated_decode_classical(&PauliString::identity(48), 2),
            Err(SteaneError::NotPowerOfSeven { .. })
        ));
        assert!(concatenated_decode_classical(&PauliString::identity(1), 0).is_err());
    }
}
