use nalgebra::SymmetricEigen;

use super::gate::UnitaryGate;
use super::state::{apply_matrix, bit_of, check_targets, StateVector};
use super::{CMatrix, QuantumError, C64, MAX_DENSITY_QUBITS, STRUCTURAL_TOL};

/// Mixed state on up to [`MAX_DENSITY_QUBITS`] qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (all within 1e-9).
    pub fn new(matrix: CMatrix) -> Result<Self, QuantumError> {
        let num_qubits = qubits_for_dim(matrix.nrows(), matrix.ncols())?;
        let rho = Self { num_qubits, matrix };
        rho.validate()?;
        Ok(rho)
    }

    pub fn from_pure(state: &StateVector) -> Result<Self, QuantumError> {
        let num_qubits = state.num_qubits();
        check_capacity(num_qubits)?;
        let dim = state.dim();
        let amps = state.amplitudes();
        let matrix = CMatrix::from_fn(dim, dim, |i, j| amps[i] * amps[j].conj());
        Ok(Self { num_qubits, matrix })
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self, QuantumError> {
        Self::from_pure(&StateVector::basis(num_qubits, index)?)
    }

    pub fn maximally_mixed(num_qubits: usize) -> Result<Self, QuantumError> {
        check_capacity(num_qubits)?;
        let dim = 1 << num_qubits;
        Ok(Self {
            num_qubits,
            matrix: CMatrix::identity(dim, dim) / C64::new(dim as f64, 0.0),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).camax()
    }

    /// Ascending real eigenvalues of the Hermitian part.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn validate(&self) -> Result<(), QuantumError> {
        let defect = self.hermiticity_defect();
        if defect > STRUCTURAL_TOL {
            return Err(QuantumError::NotHermitian(defect));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > STRUCTURAL_TOL || tr.im.abs() > STRUCTURAL_TOL {
            return Err(QuantumError::BadTrace(tr.re));
        }
        let min = self.eigenvalues()[0];
        if min < -STRUCTURAL_TOL {
            return Err(QuantumError::NotPositive(min));
        }
        Ok(())
    }

    /// `U ρ U†` on the given targets.
    pub fn apply(&self, gate: &UnitaryGate, targets: &[usize]) -> Result<Self, QuantumError> {
        check_targets(self.num_qubits, gate, targets)?;
        Ok(self.conjugate_by(gate.matrix(), targets))
    }

    /// Applies `M ρ M†` for an arbitrary (not necessarily unitary) local
    /// operator already validated against the register.
    pub(crate) fn conjugate_by(&self, op: &CMatrix, targets: &[usize]) -> Self {
        let n = self.num_qubits;
        let dim = self.dim();
        let mut m = self.matrix.clone();
        let mut buf = vec![C64::new(0.0, 0.0); dim];
        for j in 0..dim {
            buf.copy_from_slice(m.column(j).as_slice());
            apply_matrix(&mut buf, n, op, targets);
            m.column_mut(j).copy_from_slice(&buf);
        }
        // (A M†)_{ij} = Σ_k A_{ik} conj(M_{jk}): each row transforms by conj(M).
        let conj_op = op.map(|c| c.conj());
        for i in 0..dim {
            for (k, b) in buf.iter_mut().enumerate() {
                *b = m[(i, k)];
            }
            apply_matrix(&mut buf, n, &conj_op, targets);
            for (k, b) in buf.iter().enumerate() {
                m[(i, k)] = *b;
            }
        }
        Self {
            num_qubits: n,
            matrix: m,
        }
    }

    /// `(1 - w) ρ + w σ`; assumes `w ∈ [0, 1]` and equal dimensions.
    pub(crate) fn mix(&self, other: &DensityMatrix, w: f64) -> Self {
        Self {
            num_qubits: self.num_qubits,
            matrix: self.matrix.scale(1.0 - w) + other.matrix.scale(w),
        }
    }

    /// Replaces the qubits in `subsystem` by the maximally mixed state:
    /// `I_S / D_S ⊗ Tr_S(ρ)`, keeping qubit order.
    pub(crate) fn replace_with_mixed(&self, subsystem: &[usize]) -> CMatrix {
        let n = self.num_qubits;
        let dim = self.dim();
        let smask: usize = subsystem.iter().map(|&q| bit_of(n, q)).sum();
        let ds = (1usize << subsystem.len()) as f64;
        // enumerate all settings of the subsystem bits
        let settings: Vec<usize> = (0..dim).filter(|i| i & !smask == 0).collect();
        CMatrix::from_fn(dim, dim, |i, j| {
            if i & smask != j & smask {
                return C64::new(0.0, 0.0);
            }
            let (ri, rj) = (i & !smask, j & !smask);
            let partial: C64 = settings
                .iter()
                .map(|&s| self.matrix[(ri | s, rj | s)])
                .sum();
            partial / ds
        })
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        Self {
            num_qubits: matrix.nrows().trailing_zeros() as usize,
            matrix,
        }
    }
}

pub(crate) fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let herm = (m + m.adjoint()).scale(0.5);
    let mut ev: Vec<f64> = SymmetricEigen::new(herm)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

pub(crate) fn check_capacity(num_qubits: usize) -> Result<(), QuantumError> {
    if num_qubits == 0 || num_qubits > MAX_DENSITY_QUBITS {
        return Err(QuantumError::Capacity {
            kind: "density matrix",
            requested: num_qubits,
            max: MAX_DENSITY_QUBITS,
        });
    }
    Ok(())
}

fn qubits_for_dim(rows: usize, cols: usize) -> Result<usize, QuantumError> {
    if rows != cols {
        return Err(QuantumError::DimensionMismatch {
            left: rows,
            right: cols,
        });
    }
    if rows < 2 || !rows.is_power_of_two() {
        return Err(QuantumError::NotPowerOfTwo(rows));
    }
    let n = rows.trailing_zeros() as usize;
    check_capacity(n)?;
    Ok(n)
}
