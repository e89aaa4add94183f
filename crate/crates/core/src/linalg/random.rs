//! Seeded sampling of Haar-random states, unitaries and isometries.
//!
//! All samplers draw from [`ChaCha8Rng`]. Complex Gaussians are produced as a
//! real part followed by an imaginary part, each a standard normal from
//! `rand_distr::StandardNormal`, so the stream order is fixed by the order in
//! which amplitudes (or matrix entries, column-major for isometries) are filled.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::ComplexMatrix;
use super::state::StateVector;
use crate::error::{invalid, Result};

pub const MAX_QUBITS: usize = 6;

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-random pure state: `2^n` i.i.d. complex Gaussians, normalized.
///
/// Identical `(n_qubits, seed)` pairs produce bitwise-identical amplitudes.
pub fn haar_random_pure(n_qubits: usize, seed: u64) -> Result<StateVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_random_pure_with(&mut rng, n_qubits)
}

pub fn haar_random_pure_with<R: Rng + ?Sized>(rng: &mut R, n_qubits: usize) -> Result<StateVector> {
    if !(1..=MAX_QUBITS).contains(&n_qubits) {
        return invalid(format!("Haar sampling supports 1..={MAX_QUBITS} qubits, got {n_qubits}"));
    }
    let amps: Vec<Complex64> = (0..1usize << n_qubits).map(|_| complex_gaussian(rng)).collect();
    StateVector::from_unnormalized(amps)
}

/// Haar-random isometry with `rows ≥ cols`, i.e. orthonormal columns, via
/// Gram–Schmidt on a complex Gaussian matrix.
pub fn haar_isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    while columns.len() < cols {
        let mut v: Vec<Complex64> = (0..rows).map(|_| complex_gaussian(rng)).collect();
        // Two passes of modified Gram–Schmidt for orthogonality to rounding.
        for _ in 0..2 {
            for u in &columns {
                let overlap: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= overlap * y;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            columns.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_fn(rows, cols, |i, j| columns[j][i])
}

pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    haar_isometry(rng, dim, dim)
}

/// Random PSD matrix of the given rank with unit trace.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, rank, |_, _| complex_gaussian(rng));
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    m.scale_real(1.0 / tr)
}

/// Hermitian matrix with i.i.d. Gaussian entries (GUE-like, unnormalized).
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    (&g + &g.adjoint()).scale_real(0.5)
}
