//! Cyclic Jacobi diagonalization of Hermitian matrices.
//!
//! Each rotation acts on a pair of indices `(p, q)`. The off-diagonal element
//! `h_pq = |h_pq| e^{iφ}` is first made real by the phase `diag(1, e^{-iφ})`
//! and then annihilated by a real Givens rotation, so the combined update is
//! the unitary
//!
//! ```text
//! J = [[ c,            s           ],
//!      [ -s e^{-iφ},   c e^{-iφ}   ]]
//! ```
//!
//! applied as `H ← J† H J` and accumulated as `V ← V J`.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{invalid, Result};

/// Off-diagonal Frobenius threshold, relative to the input norm.
pub const JACOBI_THRESHOLD: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Largest entrywise Hermiticity defect accepted by [`hermitian_eig`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues in descending order with orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenSystem {
    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * self.eigenvalues[k])
                .sum()
        })
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// Number of eigenvalues strictly above `threshold`.
    pub fn rank(&self, threshold: f64) -> usize {
        self.eigenvalues.iter().filter(|&&l| l > threshold).count()
    }
}

/// Diagonalizes a Hermitian matrix with cyclic Jacobi sweeps.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<EigenSystem> {
    if !h.is_square() {
        return invalid(format!("eigensolver needs a square matrix, got {}x{}", h.rows(), h.cols()));
    }
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return invalid(format!("matrix is not Hermitian (defect {defect:e})"));
    }
    let n = h.rows();
    // Work on the exactly Hermitian part.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(h[(i, i)].re, 0.0)
        } else {
            0.5 * (h[(i, j)] + h[(j, i)].conj())
        }
    });
    let mut v = ComplexMatrix::identity(n);
    let scale = h.frobenius_norm().max(f64::MIN_POSITIVE);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= JACOBI_THRESHOLD * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / mag; // e^{iφ}
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let j_pp = Complex64::new(c, 0.0);
    let j_pq = Complex64::new(s, 0.0);
    let j_qp = -s * phase.conj();
    let j_qq = c * phase.conj();

    let n = a.rows();
    // A ← A J
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    // A ← J† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    // V ← V J
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

/// Negative eigenvalues above this are clamped to zero before square roots.
pub const PSD_CLAMP: f64 = 1e-10;
/// Eigenvalues below this make the input "significantly" indefinite.
pub const PSD_REJECT: f64 = -1e-8;

/// Principal square root of a Hermitian positive semidefinite matrix.
pub fn matrix_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    if let Some(&min) = eig.eigenvalues.last() {
        if min < PSD_REJECT {
            return invalid(format!("matrix has a negative eigenvalue {min:e}"));
        }
    }
    let roots = EigenSystem {
        eigenvalues: eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect(),
        eigenvectors: eig.eigenvectors,
    };
    Ok(roots.reconstruct())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{haar_unitary, random_psd};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn diagonal_spectrum_sorted() {
        let e = hermitian_eig(&ComplexMatrix::from_real_diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let x = ComplexMatrix::from_vec(2, 2, vec![zero, one, one, zero]).unwrap();
        let e = hermitian_eig(&x).unwrap();
        assert_close(e.eigenvalues[0], 1.0, 1e-14);
        assert_close(e.eigenvalues[1], -1.0, 1e-14);
    }

    #[test]
    fn pauli_y_spectrum() {
        let zero = Complex64::new(0.0, 0.0);
        let y = ComplexMatrix::from_vec(
            2,
            2,
            vec![zero, Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), zero],
        )
        .unwrap();
        let e = hermitian_eig(&y).unwrap();
        assert_close(e.eigenvalues[0], 1.0, 1e-14);
        assert_close(e.eigenvalues[1], -1.0, 1e-14);
        assert!(e.reconstruct().distance(&y) < 1e-14);
    }

    #[test]
    fn random_hermitian_reconstruction() {
        // H = U D U† from a Haar unitary and a known spectrum.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = haar_unitary(&mut rng, 16);
        let spectrum: Vec<f64> = (0..16).map(|k| (k as f64) * 0.37 - 2.5).collect();
        let h = &(&u * &ComplexMatrix::from_real_diagonal(&spectrum)) * &u.adjoint();
        let e = hermitian_eig(&h).unwrap();
        assert!(e.reconstruct().distance(&h) < 1e-10);
        let vv = &e.eigenvectors.adjoint() * &e.eigenvectors;
        assert!(vv.distance(&ComplexMatrix::identity(16)) < 1e-10);
        let mut expected = spectrum.clone();
        expected.sort_by(|a, b| b.total_cmp(a));
        for (got, want) in e.eigenvalues.iter().zip(&expected) {
            assert_close(*got, *want, 1e-10);
        }
        assert_close(e.eigenvalues.iter().sum::<f64>(), h.trace().re, 1e-10);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_vec(
            2,
            2,
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        assert!(hermitian_eig(&m).is_err());
        assert!(hermitian_eig(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn sqrt_of_identity_and_diagonal() {
        let i = ComplexMatrix::identity(4);
        assert!(matrix_sqrt_psd(&i).unwrap().distance(&i) < 1e-14);
        let d = matrix_sqrt_psd(&ComplexMatrix::from_real_diagonal(&[4.0, 9.0])).unwrap();
        assert!(d.distance(&ComplexMatrix::from_real_diagonal(&[2.0, 3.0])) < 1e-14);
    }

    #[test]
    fn sqrt_squares_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dim in [2, 4, 8, 16] {
            let m = random_psd(&mut rng, dim, dim / 2 + 1);
            let r = matrix_sqrt_psd(&m).unwrap();
            assert!(r.is_hermitian(1e-12));
            assert!((&r * &r).distance(&m) < 1e-9);
            let e = hermitian_eig(&r).unwrap();
            assert!(*e.eigenvalues.last().unwrap() > -1e-10);
        }
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        assert!(matrix_sqrt_psd(&ComplexMatrix::from_real_diagonal(&[1.0, -0.1])).is_err());
        // Tiny negative drift is clamped.
        let r = matrix_sqrt_psd(&ComplexMatrix::from_real_diagonal(&[1.0, -1e-11])).unwrap();
        assert_eq!(r[(1, 1)], Complex64::new(0.0, 0.0));
    }
}
