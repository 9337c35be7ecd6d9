use super::density::{hermitian_eigenvalues, DensityMatrix};
use super::rng::StreamRng;
use super::sampling::haar_unitary;
use super::{CMatrix, QuantumError, C64, STRUCTURAL_TOL};

/// A positive operator-valued measure: PSD elements summing to the identity.
#[derive(Clone, Debug)]
pub struct Povm {
    elements: Vec<CMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<CMatrix>) -> Result<Self, QuantumError> {
        let dim = match elements.first() {
            Some(e) => e.nrows(),
            None => return Err(QuantumError::InvalidPovm("no elements".into())),
        };
        let mut sum = CMatrix::zeros(dim, dim);
        for (k, e) in elements.iter().enumerate() {
            if e.nrows() != dim || e.ncols() != dim {
                return Err(QuantumError::DimensionMismatch {
                    left: dim,
                    right: e.nrows().max(e.ncols()),
                });
            }
            if (e - e.adjoint()).camax() > STRUCTURAL_TOL {
                return Err(QuantumError::InvalidPovm(format!(
                    "element {k} is not Hermitian"
                )));
            }
            let min = hermitian_eigenvalues(e)[0];
            if min < -STRUCTURAL_TOL {
                return Err(QuantumError::InvalidPovm(format!(
                    "element {k} has eigenvalue {min:e}"
                )));
            }
            sum += e;
        }
        let defect = (sum - CMatrix::identity(dim, dim)).camax();
        if defect > STRUCTURAL_TOL {
            return Err(QuantumError::InvalidPovm(format!(
                "elements sum to identity only within {defect:e}"
            )));
        }
        Ok(Self { elements })
    }

    pub fn computational_basis(num_qubits: usize) -> Result<Self, QuantumError> {
        let dim = 1usize << num_qubits;
        let elements = (0..dim)
            .map(|k| {
                let mut m = CMatrix::zeros(dim, dim);
                m[(k, k)] = C64::new(1.0, 0.0);
                m
            })
            .collect();
        Self::new(elements)
    }

    /// Rank-one projectors onto the columns of a Haar-random unitary.
    pub fn haar_projective(dim: usize, rng: &mut StreamRng) -> Result<Self, QuantumError> {
        let u = haar_unitary(dim, rng);
        let elements = (0..dim)
            .map(|k| {
                let col = u.column(k);
                col * col.adjoint()
            })
            .collect();
        Self::new(elements)
    }

    /// `{E, I - E}` with `E = V diag(u) V†`, `V` Haar-random and `u_i ~ U[0, 1]`.
    pub fn random_two_outcome(dim: usize, rng: &mut StreamRng) -> Result<Self, QuantumError> {
        let v = haar_unitary(dim, rng);
        let weights: Vec<f64> = (0..dim).map(|_| rng.uniform()).collect();
        let d = CMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                C64::new(weights[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let mut e = &v * d * v.adjoint();
        e = (&e + e.adjoint()).scale(0.5);
        let complement = CMatrix::identity(dim, dim) - &e;
        Self::new(vec![e, complement])
    }

    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    /// Outcome probabilities `Tr(M_k ρ)`.
    pub fn probabilities(&self, rho: &DensityMatrix) -> Result<Vec<f64>, QuantumError> {
        if rho.dim() != self.dim() {
            return Err(QuantumError::DimensionMismatch {
                left: rho.dim(),
                right: self.dim(),
            });
        }
        Ok(self
            .elements
            .iter()
            .map(|m| (m * rho.matrix()).trace().re)
            .collect())
    }
}

pub fn povm_probabilities(rho: &DensityMatrix, povm: &Povm) -> Result<Vec<f64>, QuantumError> {
    povm.probabilities(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::channel::depolarize;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn basis_outcomes() {
        let povm = Povm::computational_basis(1).unwrap();
        let zero = DensityMatrix::basis(1, 0).unwrap();
        assert!(close(&povm.probabilities(&zero).unwrap(), &[1.0, 0.0]));
        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        assert!(close(&povm.probabilities(&mixed).unwrap(), &[0.5, 0.5]));
        let noisy = depolarize(&zero, 0.03, None).unwrap();
        assert!(close(&povm.probabilities(&noisy).unwrap(), &[0.985, 0.015]));
    }

    #[test]
    fn dimension_mismatch() {
        let povm = Povm::computational_basis(2).unwrap();
        let rho = DensityMatrix::basis(1, 0).unwrap();
        assert!(matches!(
            povm.probabilities(&rho),
            Err(QuantumError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rejects_incomplete_sets() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = C64::new(1.0, 0.0);
        assert!(Povm::new(vec![m]).is_err());
        assert!(Povm::new(vec![]).is_err());
    }

    #[test]
    fn random_povms_are_valid() {
        let mut rng = StreamRng::new(3, 0);
        for dim in [2, 4, 8] {
            let a = Povm::haar_projective(dim, &mut rng).unwrap();
            assert_eq!(a.len(), dim);
            let b = Povm::random_two_outcome(dim, &mut rng).unwrap();
            assert_eq!(b.len(), 2);
        }
    }
}
