use num_complex::Complex64;

use super::eig::hermitian_eig;
use super::matrix::{kron, ComplexMatrix};
use crate::error::{dimension, invalid, Result};

pub const NORM_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const EIGEN_FLOOR: f64 = -1e-10;

/// Normalized pure state of `n` qubits. Qubit 0 is the most significant bit
/// of the computational-basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return dimension(format!("state length {len} is not 2^n with n >= 1"));
    }
    Ok(len.trailing_zeros() as usize)
}

impl StateVector {
    /// Wraps amplitudes that must already have unit norm within `1e-12`.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        Self::with_tolerance(amps, NORM_TOL)
    }

    pub fn with_tolerance(amps: Vec<Complex64>, tol: f64) -> Result<Self> {
        let n_qubits = qubits_for_len(amps.len())?;
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return invalid("amplitudes must be finite");
        }
        let norm = norm(&amps);
        if (norm - 1.0).abs() > tol {
            return invalid(format!("state norm {norm} differs from 1"));
        }
        Ok(Self { n_qubits, amps })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn from_unnormalized(amps: Vec<Complex64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amps.len())?;
        let norm = norm(&amps);
        if !(norm.is_finite() && norm > 1e-300) {
            return invalid("cannot normalize a zero or non-finite vector");
        }
        Ok(Self {
            n_qubits,
            amps: amps.into_iter().map(|z| z / norm).collect(),
        })
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if n_qubits == 0 || index >= dim {
            return invalid(format!("basis index {index} out of range for {n_qubits} qubits"));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `self ⊗ other`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self {
            n_qubits: self.n_qubits + other.n_qubits,
            amps,
        }
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            n_qubits: self.n_qubits,
            matrix: ComplexMatrix::outer(&self.amps, &self.amps),
        }
    }

    /// Reorders qubits so that new qubit `k` is old qubit `order[k]`.
    pub fn permute_qubits(&self, order: &[usize]) -> Result<Self> {
        check_permutation(order, self.n_qubits)?;
        let n = self.n_qubits;
        let mut amps = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (new_index, slot) in amps.iter_mut().enumerate() {
            let mut old_index = 0;
            for (k, &old_q) in order.iter().enumerate() {
                let bit = (new_index >> (n - 1 - k)) & 1;
                old_index |= bit << (n - 1 - old_q);
            }
            *slot = self.amps[old_index];
        }
        Ok(Self { n_qubits: n, amps })
    }
}

fn norm(amps: &[Complex64]) -> f64 {
    amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return invalid(format!("permutation of {n} qubits has length {}", order.len()));
    }
    for &q in order {
        if q >= n || seen[q] {
            return invalid(format!("{order:?} is not a permutation of 0..{n}"));
        }
        seen[q] = true;
    }
    Ok(())
}

/// Hermitian, positive semidefinite, unit-trace matrix on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-12), unit trace (1e-12) and eigenvalues ≥ −1e-10.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, TRACE_TOL)
    }

    /// Same checks with a caller-chosen Hermiticity/trace tolerance; the
    /// eigenvalue floor is `-max(tol, 1e-10)`.
    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return dimension(format!("density matrix must be square, got {}x{}", matrix.rows(), matrix.cols()));
        }
        let n_qubits = qubits_for_len(matrix.rows())?;
        let defect = matrix.hermiticity_defect();
        if defect > tol {
            return invalid(format!("density matrix is not Hermitian (defect {defect:e})"));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return invalid(format!("density matrix trace {tr} differs from 1"));
        }
        let eig = hermitian_eig(&matrix)?;
        let floor = -(tol.max(-EIGEN_FLOOR));
        if let Some(&min) = eig.eigenvalues.last() {
            if min < floor {
                return invalid(format!("density matrix has negative eigenvalue {min:e}"));
            }
        }
        Ok(Self { n_qubits, matrix })
    }

    /// Skips validation; for matrices that are density matrices by construction.
    pub(crate) fn from_parts_unchecked(n_qubits: usize, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.rows(), 1 << n_qubits);
        Self { n_qubits, matrix }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self {
            n_qubits,
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// `Σ w_k |ψ_k⟩⟨ψ_k|` for nonnegative weights summing to one.
    pub fn mixture(weights: &[f64], states: &[StateVector]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return dimension("mixture needs one weight per state");
        }
        let n = states[0].n_qubits();
        if states.iter().any(|s| s.n_qubits() != n) {
            return dimension("mixture states must share a qubit count");
        }
        if weights.iter().any(|&w| w < 0.0) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-10 {
            return invalid("mixture weights must be nonnegative and sum to 1");
        }
        let dim = 1usize << n;
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (w, s) in weights.iter().zip(states) {
            m = &m + &s.density().matrix.scale_real(*w);
        }
        Ok(Self::from_parts_unchecked(n, m))
    }

    /// Convex combination `t·self + (1−t)·other`.
    pub fn blend(&self, other: &Self, t: f64) -> Result<Self> {
        if self.n_qubits != other.n_qubits {
            return dimension("blend needs equal qubit counts");
        }
        if !(0.0..=1.0).contains(&t) {
            return invalid(format!("blend weight {t} outside [0, 1]"));
        }
        let m = &self.matrix.scale_real(t) + &other.matrix.scale_real(1.0 - t);
        Ok(Self::from_parts_unchecked(self.n_qubits, m))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            n_qubits: self.n_qubits + other.n_qubits,
            matrix: kron(&self.matrix, &other.matrix),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ |ρ_ij|² for Hermitian ρ.
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector) -> f64 {
        let rv = self.matrix.mul_vec(psi.amplitudes());
        psi.amplitudes().iter().zip(&rv).map(|(a, b)| a.conj() * b).sum::<Complex64>().re
    }
}

fn check_subset(keep: &[usize], n: usize) -> Result<()> {
    if keep.is_empty() {
        return invalid("qubit subset must be nonempty");
    }
    let mut seen = vec![false; n];
    for &q in keep {
        if q >= n {
            return invalid(format!("qubit index {q} out of range for {n} qubits"));
        }
        if seen[q] {
            return invalid(format!("qubit index {q} repeated"));
        }
        seen[q] = true;
    }
    Ok(())
}

/// Basis-index offsets for the kept and traced-out qubit groups.
fn index_tables(keep: &[usize], n: usize) -> (Vec<usize>, Vec<usize>) {
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let table = |qs: &[usize]| -> Vec<usize> {
        let k = qs.len();
        (0..1usize << k)
            .map(|a| {
                qs.iter()
                    .enumerate()
                    .map(|(j, &q)| ((a >> (k - 1 - j)) & 1) << (n - 1 - q))
                    .sum()
            })
            .collect()
    };
    (table(keep), table(&traced))
}

/// Reduced state on `keep`. The output qubit order follows `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    check_subset(keep, n)?;
    let (kept, traced) = index_tables(keep, n);
    let m = &rho.matrix;
    let out = ComplexMatrix::from_fn(kept.len(), kept.len(), |a, b| {
        traced.iter().map(|&t| m[(kept[a] | t, kept[b] | t)]).sum()
    });
    Ok(DensityMatrix::from_parts_unchecked(keep.len(), out))
}

/// Reduced state of a pure state on `keep`, without forming `|ψ⟩⟨ψ|`.
pub fn partial_trace_pure(psi: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let n = psi.n_qubits();
    check_subset(keep, n)?;
    let (kept, traced) = index_tables(keep, n);
    let amps = psi.amplitudes();
    let dim = kept.len();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for a in 0..dim {
        for b in a..dim {
            let v: Complex64 = traced
                .iter()
                .map(|&t| amps[kept[a] | t] * amps[kept[b] | t].conj())
                .sum();
            out[(a, b)] = v;
            out[(b, a)] = v.conj();
        }
    }
    Ok(DensityMatrix::from_parts_unchecked(keep.len(), out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{haar_random_pure, random_psd};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn bell() -> StateVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::new(vec![r(s), r(0.0), r(0.0), r(s)]).unwrap()
    }

    fn ghz(n: usize) -> StateVector {
        let mut amps = vec![r(0.0); 1 << n];
        amps[0] = r(std::f64::consts::FRAC_1_SQRT_2);
        amps[(1 << n) - 1] = r(std::f64::consts::FRAC_1_SQRT_2);
        StateVector::new(amps).unwrap()
    }

    fn random_density(seed: u64, n: usize) -> DensityMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DensityMatrix::new(random_psd(&mut rng, 1 << n, 1 << n)).unwrap()
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let red = partial_trace(&bell().density(), &[0]).unwrap();
        assert!(red.matrix().distance(DensityMatrix::maximally_mixed(1).matrix()) < 1e-15);
    }

    #[test]
    fn product_marginal_recovers_factor() {
        let a = random_density(1, 1);
        let b = random_density(2, 2);
        let ab = a.tensor(&b);
        assert!(partial_trace(&ab, &[0]).unwrap().matrix().distance(a.matrix()) < 1e-14);
        assert!(partial_trace(&ab, &[1, 2]).unwrap().matrix().distance(b.matrix()) < 1e-14);
    }

    #[test]
    fn ghz4_three_qubit_marginal() {
        let red = partial_trace(&ghz(4).density(), &[0, 1, 2]).unwrap();
        let mut expected = ComplexMatrix::zeros(8, 8);
        expected[(0, 0)] = r(0.5);
        expected[(7, 7)] = r(0.5);
        assert!(red.matrix().distance(&expected) < 1e-15);
    }

    #[test]
    fn pure_and_mixed_partial_traces_agree() {
        let psi = haar_random_pure(5, 9).unwrap();
        for keep in [vec![0], vec![2, 4], vec![4, 1, 3], vec![0, 1, 2, 3]] {
            let a = partial_trace(&psi.density(), &keep).unwrap();
            let b = partial_trace_pure(&psi, &keep).unwrap();
            assert!(a.matrix().distance(b.matrix()) < 1e-14);
        }
    }

    #[test]
    fn keep_order_permutes_output() {
        let a = random_density(3, 1);
        let b = random_density(4, 1);
        let ab = a.tensor(&b);
        let ba = partial_trace(&ab, &[1, 0]).unwrap();
        assert!(ba.matrix().distance(b.tensor(&a).matrix()) < 1e-14);
    }

    #[test]
    fn nested_traces_commute() {
        let rho = random_density(5, 4);
        // Trace out qubit 3, then qubit 1 (index 1 in the reduced frame).
        let step = partial_trace(&rho, &[0, 1, 2]).unwrap();
        let twice = partial_trace(&step, &[0, 2]).unwrap();
        let once = partial_trace(&rho, &[0, 2]).unwrap();
        assert!(twice.matrix().distance(once.matrix()) < 1e-12);
    }

    #[test]
    fn invalid_subsets_rejected() {
        let rho = random_density(6, 2);
        assert!(partial_trace(&rho, &[]).is_err());
        assert!(partial_trace(&rho, &[2]).is_err());
        assert!(partial_trace(&rho, &[0, 0]).is_err());
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.5, 0.5])).is_ok());
        assert!(DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.6, 0.5])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[1.2, -0.2])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.5, 0.25, 0.25])).is_err());
    }

    #[test]
    fn state_validation() {
        assert!(StateVector::new(vec![r(1.0), r(0.0), r(0.0)]).is_err());
        assert!(StateVector::new(vec![r(0.9), r(0.0)]).is_err());
        assert!(StateVector::from_unnormalized(vec![r(0.0), r(0.0)]).is_err());
    }

    #[test]
    fn permutation_moves_qubits() {
        // |01⟩ with qubits swapped is |10⟩.
        let s = StateVector::basis(2, 0b01).unwrap();
        let p = s.permute_qubits(&[1, 0]).unwrap();
        assert_eq!(p, StateVector::basis(2, 0b10).unwrap());
        let psi = haar_random_pure(3, 1).unwrap();
        let back = psi.permute_qubits(&[2, 0, 1]).unwrap().permute_qubits(&[1, 2, 0]).unwrap();
        assert!(back.amplitudes().iter().zip(psi.amplitudes()).all(|(a, b)| (a - b).norm() < 1e-15));
    }
}
