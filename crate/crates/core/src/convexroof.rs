//! Heuristic convex-roof estimation.
//!
//! Every rank-`K` pure-state decomposition of a rank-`r` density matrix
//! `ρ = Σᵢ λᵢ |eᵢ⟩⟨eᵢ|` is `|ψ̃_k⟩ = Σᵢ u_{ki} √λᵢ |eᵢ⟩` for some `K × r`
//! isometry `u`. The search below never stores `u` explicitly: a two-row
//! unitary applied to `u` acts identically on the subnormalized vectors
//! `|ψ̃_k⟩`, so those are rotated directly and only the two touched elements
//! are re-evaluated per proposal.
//!
//! The returned value is always an upper bound on the roof; no claim of
//! global optimality is made.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{dimension, invalid, Result};
use crate::linalg::random::haar_isometry;
use crate::linalg::{hermitian_eig, ComplexMatrix, DensityMatrix, EigenSystem, StateVector};

/// Eigenvalues at or below this are treated as zero when taking the rank.
pub const RANK_THRESHOLD: f64 = 1e-10;
const RECONSTRUCTION_TOL: f64 = 1e-8;
const ISOMETRY_TOL: f64 = 1e-9;
const WEIGHT_FLOOR: f64 = 1e-14;
const PROPOSALS_PER_BATCH: usize = 20;
const STEP_DECAY: f64 = 0.7;
const INITIAL_STEP: f64 = FRAC_PI_4;

/// Weighted ensemble `{w_k, |ψ_k⟩}` of pure states.
#[derive(Debug, Clone)]
pub struct Decomposition {
    weights: Vec<f64>,
    states: Vec<StateVector>,
}

impl Decomposition {
    pub fn new(weights: Vec<f64>, states: Vec<StateVector>) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return dimension("decomposition needs one weight per state");
        }
        let n = states[0].n_qubits();
        if states.iter().any(|s| s.n_qubits() != n) {
            return dimension("decomposition states must share a qubit count");
        }
        if weights.iter().any(|&w| w.is_nan() || w < 0.0) {
            return invalid("decomposition weights must be nonnegative");
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return invalid(format!("decomposition weights sum to {total}, not 1"));
        }
        Ok(Self { weights, states })
    }

    /// Builds the ensemble from subnormalized vectors `√w_k |ψ_k⟩`, dropping
    /// elements whose weight is below `1e-14`.
    fn from_subnormalized(vectors: &[Vec<Complex64>]) -> Result<Self> {
        let mut weights = Vec::new();
        let mut states = Vec::new();
        for v in vectors {
            let w: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if w > WEIGHT_FLOOR {
                weights.push(w);
                states.push(StateVector::from_unnormalized(v.clone())?);
            }
        }
        if states.is_empty() {
            return invalid("decomposition has no element with positive weight");
        }
        Ok(Self { weights, states })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn n_qubits(&self) -> usize {
        self.states[0].n_qubits()
    }

    /// `Σ w_k |ψ_k⟩⟨ψ_k|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let dim = self.states[0].dim();
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (w, s) in self.weights.iter().zip(&self.states) {
            let a = s.amplitudes();
            for i in 0..dim {
                for j in 0..dim {
                    m[(i, j)] += a[i] * a[j].conj() * *w;
                }
            }
        }
        m
    }

    /// Ensemble average `Σ w_k f(ψ_k)`.
    pub fn average(&self, f: impl Fn(&StateVector) -> f64) -> f64 {
        self.weights.iter().zip(&self.states).map(|(w, s)| w * f(s)).sum()
    }

    fn subnormalized(&self) -> Vec<Vec<Complex64>> {
        self.weights
            .iter()
            .zip(&self.states)
            .map(|(w, s)| s.amplitudes().iter().map(|z| z * w.sqrt()).collect())
            .collect()
    }
}

/// Decomposition `|ψ̃_k⟩ = Σᵢ u_{ki} √λᵢ |eᵢ⟩` for a `K × r` isometry `u`,
/// where `r` is the number of eigenvalues above `1e-10`.
pub fn decomposition_from_isometry(eig: &EigenSystem, u: &ComplexMatrix) -> Result<Decomposition> {
    let rank = eig.rank(RANK_THRESHOLD);
    if rank == 0 {
        return invalid("matrix has no eigenvalue above the rank threshold");
    }
    if u.cols() != rank || u.rows() < rank {
        return dimension(format!(
            "isometry must be K x {rank} with K >= {rank}, got {}x{}",
            u.rows(),
            u.cols()
        ));
    }
    let gram = &u.adjoint() * u;
    let defect = gram.distance(&ComplexMatrix::identity(rank));
    if defect > ISOMETRY_TOL {
        return invalid(format!("u does not have orthonormal columns (defect {defect:e})"));
    }
    let basis = scaled_eigenbasis(eig, rank);
    let vectors: Vec<Vec<Complex64>> = (0..u.rows())
        .map(|k| combine(&basis, (0..rank).map(|i| u[(k, i)])))
        .collect();
    Decomposition::from_subnormalized(&vectors)
}

/// `√λᵢ |eᵢ⟩` for the leading `rank` eigenpairs.
fn scaled_eigenbasis(eig: &EigenSystem, rank: usize) -> Vec<Vec<Complex64>> {
    (0..rank)
        .map(|i| {
            let s = eig.eigenvalues[i].max(0.0).sqrt();
            eig.eigenvector(i).into_iter().map(|z| z * s).collect()
        })
        .collect()
}

fn combine(basis: &[Vec<Complex64>], coeffs: impl Iterator<Item = Complex64>) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); basis[0].len()];
    for (c, b) in coeffs.zip(basis) {
        for (o, x) in out.iter_mut().zip(b) {
            *o += c * x;
        }
    }
    out
}

/// Search budget for [`roof_upper_bound`].
///
/// `iterations` counts batches of 20 Givens proposals; a restart stops early
/// once its step angle decays below `tol`.
#[derive(Debug, Clone)]
pub struct RoofConfig {
    /// Decomposition cardinality `K`; `None` means `max(4, 2·rank)`.
    pub cardinality: Option<usize>,
    pub restarts: usize,
    pub seed: u64,
    pub iterations: usize,
    pub tol: f64,
    /// Extra starting points, each refined by the same local search.
    pub seeds: Vec<Decomposition>,
}

impl Default for RoofConfig {
    fn default() -> Self {
        Self {
            cardinality: None,
            restarts: 32,
            seed: 0,
            iterations: 200,
            tol: 1e-6,
            seeds: Vec::new(),
        }
    }
}

impl RoofConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }
}

#[derive(Debug, Clone)]
pub struct RoofEstimate {
    /// Upper bound on the convex roof: the ensemble average over `best`.
    pub value: f64,
    pub best: Decomposition,
    pub evaluations: usize,
    /// Whether the best restart's step angle fell below the tolerance.
    pub converged: bool,
}

/// Upper bound on `inf Σ p_k f(ψ_k)` over decompositions of `rho`.
pub fn roof_upper_bound(
    rho: &DensityMatrix,
    f: impl Fn(&StateVector) -> f64,
    cfg: &RoofConfig,
) -> Result<RoofEstimate> {
    try_roof_upper_bound(rho, |s| Ok(f(s)), cfg)
}

/// [`roof_upper_bound`] for a fallible functional; the first error aborts.
pub fn try_roof_upper_bound(
    rho: &DensityMatrix,
    f: impl Fn(&StateVector) -> Result<f64>,
    cfg: &RoofConfig,
) -> Result<RoofEstimate> {
    let eig = hermitian_eig(rho.matrix())?;
    try_roof_from_eigensystem(&eig, rho, f, cfg)
}

pub(crate) fn try_roof_from_eigensystem(
    eig: &EigenSystem,
    rho: &DensityMatrix,
    f: impl Fn(&StateVector) -> Result<f64>,
    cfg: &RoofConfig,
) -> Result<RoofEstimate> {
    let rank = eig.rank(RANK_THRESHOLD);
    if rank == 0 {
        return invalid("density matrix has no eigenvalue above the rank threshold");
    }
    let basis = scaled_eigenbasis(eig, rank);
    let k = cfg.cardinality.unwrap_or((2 * rank).max(4)).max(rank);

    let mut search = Search {
        f: &f,
        evaluations: 0,
    };

    // Eigendecomposition: the baseline every estimate must not exceed.
    let eigen_start: Vec<Vec<Complex64>> = basis.clone();
    let mut best = search.local_search(eigen_start, cfg, None)?;
    if rank == 1 {
        return search.finish(best);
    }

    for seed in &cfg.seeds {
        if seed.n_qubits() != rho.n_qubits() {
            return dimension("seed decomposition has the wrong qubit count");
        }
        let dist = seed.reconstruct().distance(rho.matrix());
        if dist > RECONSTRUCTION_TOL {
            return invalid(format!("seed decomposition does not reconstruct the state ({dist:e})"));
        }
        let run = search.local_search(seed.subnormalized(), cfg, None)?;
        if run.objective < best.objective {
            best = run;
        }
    }

    for restart in 0..cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(restart as u64);
        let u = haar_isometry(&mut rng, k, rank);
        let start: Vec<Vec<Complex64>> =
            (0..k).map(|row| combine(&basis, (0..rank).map(|i| u[(row, i)]))).collect();
        let run = search.local_search(start, cfg, Some(rng))?;
        if run.objective < best.objective {
            best = run;
        }
    }
    search.finish(best)
}

struct Run {
    vectors: Vec<Vec<Complex64>>,
    objective: f64,
    converged: bool,
}

struct Search<'a, F> {
    f: &'a F,
    evaluations: usize,
}

impl<F: Fn(&StateVector) -> Result<f64>> Search<'_, F> {
    /// Weighted value `w · f(ψ̃/‖ψ̃‖)` of one subnormalized element.
    fn contribution(&mut self, v: &[Complex64]) -> Result<f64> {
        let w: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if w <= WEIGHT_FLOOR {
            return Ok(0.0);
        }
        let s = w.sqrt();
        let state = StateVector::from_unnormalized(v.iter().map(|z| z / s).collect())?;
        self.evaluations += 1;
        Ok(w * (self.f)(&state)?)
    }

    /// Random Givens-rotation descent from `start`. Without an RNG the start is
    /// only evaluated (used for the eigendecomposition baseline).
    fn local_search(
        &mut self,
        mut vectors: Vec<Vec<Complex64>>,
        cfg: &RoofConfig,
        rng: Option<ChaCha8Rng>,
    ) -> Result<Run> {
        let mut parts = vectors
            .iter()
            .map(|v| self.contribution(v))
            .collect::<Result<Vec<f64>>>()?;
        let mut objective: f64 = parts.iter().sum();
        let Some(mut rng) = rng else {
            return Ok(Run {
                vectors,
                objective,
                converged: true,
            });
        };
        let k = vectors.len();
        if k < 2 {
            return Ok(Run {
                vectors,
                objective,
                converged: true,
            });
        }
        let mut step = INITIAL_STEP;
        let mut converged = false;
        for _ in 0..cfg.iterations {
            let mut improved = false;
            for _ in 0..PROPOSALS_PER_BATCH {
                let a = rng.random_range(0..k);
                let mut b = rng.random_range(0..k - 1);
                if b >= a {
                    b += 1;
                }
                let theta = rng.random_range(-step..=step);
                let phi = rng.random_range(0.0..2.0 * PI);
                let (s, c) = theta.sin_cos();
                let phase = Complex64::from_polar(1.0, phi);
                let new_a: Vec<Complex64> = vectors[a]
                    .iter()
                    .zip(&vectors[b])
                    .map(|(x, y)| c * x - phase * s * y)
                    .collect();
                let new_b: Vec<Complex64> = vectors[a]
                    .iter()
                    .zip(&vectors[b])
                    .map(|(x, y)| phase.conj() * s * x + c * y)
                    .collect();
                let pa = self.contribution(&new_a)?;
                let pb = self.contribution(&new_b)?;
                let candidate = objective - parts[a] - parts[b] + pa + pb;
                if candidate < objective {
                    vectors[a] = new_a;
                    vectors[b] = new_b;
                    parts[a] = pa;
                    parts[b] = pb;
                    objective = candidate;
                    improved = true;
                }
            }
            if !improved {
                step *= STEP_DECAY;
                if step < cfg.tol {
                    converged = true;
                    break;
                }
            }
        }
        // Resum to shed incremental rounding.
        objective = parts.iter().sum();
        Ok(Run {
            vectors,
            objective,
            converged,
        })
    }

    fn finish(mut self, best: Run) -> Result<RoofEstimate> {
        let decomposition = Decomposition::from_subnormalized(&best.vectors)?;
        let mut value = 0.0;
        for (w, s) in decomposition.weights.iter().zip(&decomposition.states) {
            self.evaluations += 1;
            value += w * (self.f)(s)?;
        }
        Ok(RoofEstimate {
            value,
            best: decomposition,
            evaluations: self.evaluations,
            converged: best.converged,
        })
    }
}

/// Grid resolution for [`rank2_phase_scan`].
#[derive(Debug, Clone, Copy)]
pub struct PhaseGrid {
    /// Points on `θ ∈ [0, π/2]`, endpoints included (at least 2).
    pub theta: usize,
    /// Points on `φ ∈ [0, 2π)` (at least 1).
    pub phi: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub theta: f64,
    pub phi: f64,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct PhaseScan {
    pub points: Vec<PhasePoint>,
    /// `θ*` with `sin²θ* = λ₂/(λ₁+λ₂)`.
    pub mixture_theta: f64,
    /// Values of `f` along `θ = θ*` on the φ grid.
    pub mixture_slice: Vec<PhasePoint>,
    /// `min_φ ½[f(θ*, φ) + f(θ*, φ+π)]`: the two states at `φ` and `φ+π`
    /// form an equal-weight decomposition of the rank-2 mixture, so this is
    /// an upper bound on its roof.
    pub mixture_bound: f64,
}

/// Evaluates `f` on `cos θ|e₁⟩ + e^{iφ} sin θ|e₂⟩` over a (θ, φ) grid.
pub fn rank2_phase_scan(
    e1: &StateVector,
    e2: &StateVector,
    lam: (f64, f64),
    f: impl Fn(&StateVector) -> f64,
    grid: PhaseGrid,
) -> Result<PhaseScan> {
    if e1.n_qubits() != e2.n_qubits() {
        return dimension("phase scan states must share a qubit count");
    }
    let overlap = e1.inner(e2).norm();
    if overlap > 1e-9 {
        return invalid(format!("phase scan states are not orthogonal (overlap {overlap:e})"));
    }
    if grid.theta < 2 || grid.phi < 1 {
        return invalid("phase grid needs at least 2 θ points and 1 φ point");
    }
    if lam.0 < 0.0 || lam.1 < 0.0 || lam.0 + lam.1 <= 0.0 {
        return invalid("mixture weights must be nonnegative with a positive sum");
    }
    let point = |theta: f64, phi: f64| -> Result<PhasePoint> {
        let (s, c) = theta.sin_cos();
        let phase = Complex64::from_polar(s, phi);
        let amps: Vec<Complex64> = e1
            .amplitudes()
            .iter()
            .zip(e2.amplitudes())
            .map(|(a, b)| a * c + b * phase)
            .collect();
        let state = StateVector::from_unnormalized(amps)?;
        Ok(PhasePoint {
            theta,
            phi,
            value: f(&state),
        })
    };
    let phis: Vec<f64> = (0..grid.phi).map(|j| 2.0 * PI * j as f64 / grid.phi as f64).collect();
    let mut points = Vec::with_capacity(grid.theta * grid.phi);
    for i in 0..grid.theta {
        let theta = FRAC_PI_2 * i as f64 / (grid.theta - 1) as f64;
        for &phi in &phis {
            points.push(point(theta, phi)?);
        }
    }
    let mixture_theta = (lam.1 / (lam.0 + lam.1)).sqrt().asin();
    let mixture_slice = phis
        .iter()
        .map(|&phi| point(mixture_theta, phi))
        .collect::<Result<Vec<_>>>()?;
    let mut mixture_bound = f64::INFINITY;
    for p in &mixture_slice {
        let partner = point(mixture_theta, p.phi + PI)?;
        mixture_bound = mixture_bound.min(0.5 * (p.value + partner.value));
    }
    Ok(PhaseScan {
        points,
        mixture_theta,
        mixture_slice,
        mixture_bound,
    })
}
