use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;

use super::pauli::Pauli;
use super::{CMatrix, QuantumError, C64, STRUCTURAL_TOL};

/// A unitary acting on `num_targets` qubits. The first target is the most
/// significant bit of the gate's local index.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryGate {
    label: String,
    num_targets: usize,
    matrix: CMatrix,
}

impl UnitaryGate {
    pub fn new(label: impl Into<String>, matrix: CMatrix) -> Result<Self, QuantumError> {
        let dim = matrix.nrows();
        if dim != matrix.ncols() || !dim.is_power_of_two() || dim < 2 {
            return Err(QuantumError::NotPowerOfTwo(dim));
        }
        let defect = (matrix.adjoint() * &matrix - CMatrix::identity(dim, dim)).camax();
        if defect > STRUCTURAL_TOL {
            return Err(QuantumError::NotUnitary(defect));
        }
        Ok(Self {
            label: label.into(),
            num_targets: dim.trailing_zeros() as usize,
            matrix,
        })
    }

    fn fixed(label: &str, dim: usize, entries: &[C64]) -> Self {
        Self {
            label: label.to_string(),
            num_targets: dim.trailing_zeros() as usize,
            matrix: DMatrix::from_row_slice(dim, dim, entries),
        }
    }

    pub fn identity(num_targets: usize) -> Self {
        let dim = 1 << num_targets;
        Self {
            label: "I".into(),
            num_targets,
            matrix: CMatrix::identity(dim, dim),
        }
    }

    pub fn x() -> Self {
        let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        Self::fixed("X", 2, &[o, l, l, o])
    }

    pub fn y() -> Self {
        let o = C64::new(0.0, 0.0);
        Self::fixed("Y", 2, &[o, -C64::i(), C64::i(), o])
    }

    pub fn z() -> Self {
        let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        Self::fixed("Z", 2, &[l, o, o, -l])
    }

    pub fn h() -> Self {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        Self::fixed("H", 2, &[h, h, h, -h])
    }

    pub fn s() -> Self {
        let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        Self::fixed("S", 2, &[l, o, o, C64::i()])
    }

    pub fn pauli(p: Pauli) -> Self {
        match p {
            Pauli::I => Self::identity(1),
            Pauli::X => Self::x(),
            Pauli::Y => Self::y(),
            Pauli::Z => Self::z(),
        }
    }

    /// Controlled version of a single-target gate; the control is the first target.
    pub fn controlled(gate: &UnitaryGate) -> Self {
        let inner = gate.matrix.nrows();
        let dim = 2 * inner;
        let mut m = CMatrix::identity(dim, dim);
        m.view_mut((inner, inner), (inner, inner))
            .copy_from(&gate.matrix);
        Self {
            label: format!("C{}", gate.label),
            num_targets: gate.num_targets + 1,
            matrix: m,
        }
    }

    pub fn cnot() -> Self {
        Self::controlled(&Self::x())
    }

    pub fn cz() -> Self {
        Self::controlled(&Self::z())
    }

    pub fn dagger(&self) -> Self {
        Self {
            label: format!("{}†", self.label),
            num_targets: self.num_targets,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn num_targets(&self) -> usize {
        self.num_targets
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub(crate) fn from_parts_unchecked(label: String, matrix: CMatrix) -> Self {
        Self {
            label,
            num_targets: matrix.nrows().trailing_zeros() as usize,
            matrix,
        }
    }
}
