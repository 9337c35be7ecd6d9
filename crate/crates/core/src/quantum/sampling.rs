//! Random states, unitaries and state pairs at a prescribed trace distance.

use nalgebra::SymmetricEigen;
use rand_distr::{Distribution, StandardNormal};

use super::density::{check_capacity, DensityMatrix};
use super::rng::StreamRng;
use super::state::StateVector;
use super::{trace_distance, CMatrix, QuantumError, C64, STRUCTURAL_TOL};

const PAIR_RETRIES: usize = 100;

fn complex_normal(rng: &mut StreamRng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

fn ginibre(dim: usize, rng: &mut StreamRng) -> CMatrix {
    // Row-major fill so the draw order does not depend on nalgebra's storage.
    let mut m = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            m[(i, j)] = complex_normal(rng);
        }
    }
    m
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the phases of
/// `R`'s diagonal pushed into `Q`.
pub fn haar_unitary(dim: usize, rng: &mut StreamRng) -> CMatrix {
    let qr = ginibre(dim, rng).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// `G G† / Tr(G G†)` with `G` a standard complex Ginibre matrix.
pub fn random_density_matrix(
    num_qubits: usize,
    rng: &mut StreamRng,
) -> Result<DensityMatrix, QuantumError> {
    check_capacity(num_qubits)?;
    let dim = 1 << num_qubits;
    let g = ginibre(dim, rng);
    let mut w = &g * g.adjoint();
    w = (&w + w.adjoint()).scale(0.5);
    let tr = w.trace().re;
    DensityMatrix::new(w.unscale(tr))
}

/// Haar-random pure state.
pub fn random_pure_state(
    num_qubits: usize,
    rng: &mut StreamRng,
) -> Result<StateVector, QuantumError> {
    if num_qubits == 0 {
        return Err(QuantumError::NotPowerOfTwo(1));
    }
    let amps = (0..1usize << num_qubits)
        .map(|_| complex_normal(rng))
        .collect();
    StateVector::normalized(amps)
}

/// Random pure state and a random pure state orthogonal to it.
fn orthogonal_pure_pair(
    num_qubits: usize,
    rng: &mut StreamRng,
) -> Result<(StateVector, StateVector), QuantumError> {
    let a = random_pure_state(num_qubits, rng)?;
    loop {
        let b = random_pure_state(num_qubits, rng)?;
        let overlap = a.inner(&b)?;
        let projected: Vec<C64> = b
            .amplitudes()
            .iter()
            .zip(a.amplitudes())
            .map(|(bv, av)| bv - av * overlap)
            .collect();
        if projected.iter().map(|c| c.norm_sqr()).sum::<f64>() > 1e-6 {
            return Ok((a, StateVector::normalized(projected)?));
        }
    }
}

/// Draws `(ρ, σ')` with `τ(ρ, σ') = d`.
///
/// `ρ` and `σ` are drawn from the Ginibre ensemble; if they are closer than
/// `d`, `σ` is replaced by the eigenvector of `ρ` with the smallest
/// eigenvalue, which sits at distance `1 - λ_min`. When mixed draws cannot
/// reach `d` the pair falls back to orthogonal pure states. The returned
/// `σ' = (1 - t) ρ + t σ` with `t = d / τ(ρ, σ)`, since trace distance is
/// linear along that segment.
pub fn state_pair_at_distance(
    num_qubits: usize,
    d: f64,
    rng: &mut StreamRng,
) -> Result<(DensityMatrix, DensityMatrix), QuantumError> {
    if !(d > 0.0 && d <= 1.0) {
        return Err(QuantumError::InvalidDistance(d));
    }
    check_capacity(num_qubits)?;
    if d < 1.0 - STRUCTURAL_TOL {
        for _ in 0..PAIR_RETRIES {
            let rho = random_density_matrix(num_qubits, rng)?;
            let mut sigma = random_density_matrix(num_qubits, rng)?;
            let mut dist = trace_distance(&rho, &sigma)?;
            if dist < d {
                sigma = farthest_pure_state(&rho)?;
                dist = trace_distance(&rho, &sigma)?;
            }
            if dist >= d {
                return Ok((rho.clone(), rho.mix(&sigma, d / dist)));
            }
        }
    }
    let (a, b) = orthogonal_pure_pair(num_qubits, rng)?;
    let rho = a.to_density_matrix()?;
    let sigma = b.to_density_matrix()?;
    let dist = trace_distance(&rho, &sigma)?;
    if dist + STRUCTURAL_TOL < d {
        return Err(QuantumError::PairGeneration {
            distance: d,
            attempts: PAIR_RETRIES,
        });
    }
    let t = (d / dist).min(1.0);
    Ok((rho.clone(), rho.mix(&sigma, t)))
}

fn farthest_pure_state(rho: &DensityMatrix) -> Result<DensityMatrix, QuantumError> {
    let eig = SymmetricEigen::new(rho.matrix().clone());
    let (k, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold(
            (0, f64::INFINITY),
            |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc },
        );
    let v: Vec<C64> = eig.eigenvectors.column(k).iter().copied().collect();
    StateVector::normalized(v)?.to_density_matrix()
}
