//! Seeded generators for random states and unitaries.
//!
//! All randomness in the crate flows through [`ChaCha8Rng`] so that every
//! experiment is reproducible from a single `u64` seed.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::CMatrix;
use crate::state::DensityMatrix;

/// Deterministic generator for a given seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with independent standard complex normal entries.
pub fn ginibre(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Random density matrix G·G†/Tr[G·G†]; full rank almost surely.
pub fn random_density(rng: &mut ChaCha8Rng, dims: &[usize]) -> DensityMatrix {
    let dim: usize = dims.iter().product();
    let g = ginibre(rng, dim, dim);
    let mut rho = &g * g.adjoint();
    let trace = rho.trace().re;
    rho.unscale_mut(trace);
    DensityMatrix::from_trusted(rho, dims.to_vec())
}

/// Random pure state |ψ⟩⟨ψ| with Haar-distributed |ψ⟩.
pub fn random_pure(rng: &mut ChaCha8Rng, dims: &[usize]) -> DensityMatrix {
    let dim: usize = dims.iter().product();
    let mut v = ginibre(rng, dim, 1);
    let norm = v.column(0).norm();
    v.unscale_mut(norm);
    let rho = &v * v.adjoint();
    DensityMatrix::from_trusted(rho, dims.to_vec())
}

/// Random diagonal density matrix with every probability bounded away from
/// zero, so its logarithm stays well conditioned.
pub fn random_diagonal_density(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    let raw: Vec<f64> = (0..dim).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let probs: Vec<f64> = raw.iter().map(|x| x / total).collect();
    DensityMatrix::from_probabilities(&probs).expect("normalized positive probabilities")
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the R diagonal's
/// phases folded into Q.
pub fn haar_unitary(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
    let g = ginibre(rng, dim, dim);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let mag = d.norm();
        let phase = if mag > 0.0 { d / mag } else { Complex64::ONE };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;

    #[test]
    fn random_density_is_valid_and_deterministic() {
        let mut rng = seeded_rng(11);
        let rho = random_density(&mut rng, &[2, 3]);
        assert!(linalg::hermitian_deviation(rho.matrix()) < 1e-12);
        assert!((linalg::trace_re(rho.matrix()) - 1.0).abs() < 1e-12);
        let eigs = linalg::eigvalsh(rho.matrix()).unwrap();
        assert!(eigs.iter().all(|&x| x > -1e-12));

        let mut rng2 = seeded_rng(11);
        let rho2 = random_density(&mut rng2, &[2, 3]);
        assert_eq!(rho.matrix(), rho2.matrix());
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = seeded_rng(5);
        for dim in [2, 3, 5] {
            let u = haar_unitary(&mut rng, dim);
            assert!(linalg::unitary_deviation(&u) < 1e-12);
        }
    }

    #[test]
    fn diagonal_density_has_positive_diagonal() {
        let mut rng = seeded_rng(3);
        let rho = random_diagonal_density(&mut rng, 4);
        for i in 0..4 {
            assert!(rho.matrix()[(i, i)].re > 1e-3);
        }
    }
}
