//! Entanglement measures: one-tangle, two-qubit mixed tangle, pure
//! three-tangle and the analytic three-tangle of GHZ-symmetric states.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{dimension, invalid, Result};
use crate::linalg::{
    hermitian_eig, matrix_sqrt_psd, partial_trace_pure, ComplexMatrix, DensityMatrix, StateVector,
};

const SQRT3: f64 = 1.732_050_807_568_877_2;
/// `y` coordinate of the GHZ± vertices, √3/4.
pub const GHZ_VERTEX_Y: f64 = SQRT3 / 4.0;
/// `y` coordinate of the bottom vertex of the GHZ-symmetric triangle, −1/(4√3).
pub const TRIANGLE_BOTTOM_Y: f64 = -1.0 / (4.0 * SQRT3);
const TRIANGLE_TOL: f64 = 1e-9;
const BISECTION_TOL: f64 = 1e-12;
const BISECTION_MAX_ITER: usize = 200;
const WOOTTERS_CLAMP: f64 = 1e-12;

/// One-tangle of the bipartition `focus | rest` of a pure state,
/// `2[1 − Tr ρ_A²]`, or `4 det ρ_A` when `focus` is a single qubit.
pub fn one_tangle(psi: &StateVector, focus: &[usize]) -> Result<f64> {
    let n = psi.n_qubits();
    if focus.is_empty() || focus.len() >= n {
        return invalid(format!(
            "one-tangle focus must be a proper nonempty subset of {n} qubits, got {focus:?}"
        ));
    }
    let reduced = partial_trace_pure(psi, focus)?;
    Ok(tangle_of_marginal(&reduced))
}

/// Tangle from the reduced state of the focus side of a pure state.
pub(crate) fn tangle_of_marginal(reduced: &DensityMatrix) -> f64 {
    let m = reduced.matrix();
    if reduced.n_qubits() == 1 {
        let det = m[(0, 0)].re * m[(1, 1)].re - m[(0, 1)].norm_sqr();
        4.0 * det
    } else {
        2.0 * (1.0 - reduced.purity())
    }
}

/// Spin-flipped state `(σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
fn spin_flip(rho: &ComplexMatrix) -> ComplexMatrix {
    const SIGN: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
    ComplexMatrix::from_fn(4, 4, |i, j| rho[(3 - i, 3 - j)].conj() * (SIGN[i] * SIGN[j]))
}

/// Concurrence of a two-qubit state by the Wootters closed form.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.n_qubits() != 2 {
        return dimension(format!("concurrence needs 2 qubits, got {}", rho.n_qubits()));
    }
    let sqrt_rho = matrix_sqrt_psd(rho.matrix())?;
    let flipped = spin_flip(rho.matrix());
    let r = &(&sqrt_rho * &flipped) * &sqrt_rho;
    let eig = hermitian_eig(&r)?;
    let roots: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| if l < WOOTTERS_CLAMP { 0.0 } else { l.sqrt() })
        .collect();
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}

/// Tangle (squared concurrence) of a two-qubit mixed state.
pub fn two_qubit_tangle_mixed(rho: &DensityMatrix) -> Result<f64> {
    concurrence(rho).map(|c| c * c)
}

/// Three-tangle of a pure three-qubit state, `τ_A(BC) − τ_AB − τ_AC`.
pub fn pure_three_tangle(psi: &StateVector) -> Result<f64> {
    if psi.n_qubits() != 3 {
        return dimension(format!("three-tangle needs 3 qubits, got {}", psi.n_qubits()));
    }
    let t_a_bc = one_tangle(psi, &[0])?;
    let t_ab = two_qubit_tangle_mixed(&partial_trace_pure(psi, &[0, 1])?)?;
    let t_ac = two_qubit_tangle_mixed(&partial_trace_pure(psi, &[0, 2])?)?;
    Ok(t_a_bc - t_ab - t_ac)
}

/// Three-tangle from Cayley's hyperdeterminant, `4|d₁ − 2d₂ + 4d₃|`, for a
/// normalized amplitude vector of length 8.
pub fn hyperdet_three_tangle(a: &[Complex64]) -> f64 {
    assert_eq!(a.len(), 8, "hyperdeterminant needs 8 amplitudes");
    let d1 = a[0] * a[0] * a[7] * a[7]
        + a[1] * a[1] * a[6] * a[6]
        + a[2] * a[2] * a[5] * a[5]
        + a[4] * a[4] * a[3] * a[3];
    let d2 = a[0] * a[7] * a[3] * a[4]
        + a[0] * a[7] * a[5] * a[2]
        + a[0] * a[7] * a[6] * a[1]
        + a[3] * a[4] * a[5] * a[2]
        + a[3] * a[4] * a[6] * a[1]
        + a[5] * a[2] * a[6] * a[1];
    let d3 = a[0] * a[6] * a[5] * a[3] + a[7] * a[1] * a[2] * a[4];
    4.0 * (d1 - 2.0 * d2 + 4.0 * d3).norm()
}

/// Coordinates of a three-qubit state in the GHZ-symmetric triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GhzSymCoords {
    pub x: f64,
    pub y: f64,
}

impl GhzSymCoords {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        let c = Self { x, y };
        if !c.in_triangle(TRIANGLE_TOL) {
            return invalid(format!("({x}, {y}) lies outside the GHZ-symmetric triangle"));
        }
        Ok(c)
    }

    /// The triangle has vertices `(±1/2, √3/4)` and `(0, −1/(4√3))`.
    pub fn in_triangle(&self, tol: f64) -> bool {
        let lower_edge = TRIANGLE_BOTTOM_Y + (2.0 / SQRT3) * self.x.abs();
        self.x.is_finite()
            && self.y.is_finite()
            && self.x.abs() <= 0.5 + tol
            && self.y <= GHZ_VERTEX_Y + tol
            && self.y >= lower_edge - tol
    }
}

/// Overlaps `(⟨GHZ₊|ρ|GHZ₊⟩, ⟨GHZ₋|ρ|GHZ₋⟩)`.
fn ghz_overlaps(rho: &DensityMatrix) -> (f64, f64) {
    let m = rho.matrix();
    let diag = 0.5 * (m[(0, 0)].re + m[(7, 7)].re);
    let cross = m[(0, 7)].re;
    (diag + cross, diag - cross)
}

fn check_three(rho: &DensityMatrix) -> Result<()> {
    if rho.n_qubits() != 3 {
        return dimension(format!("GHZ-symmetric routines need 3 qubits, got {}", rho.n_qubits()));
    }
    Ok(())
}

/// `x = ½(g₊ − g₋)`, `y = (g₊ + g₋ − ¼)/√3` with `g± = ⟨GHZ±|ρ|GHZ±⟩`.
pub fn ghz_sym_coords(rho: &DensityMatrix) -> Result<GhzSymCoords> {
    check_three(rho)?;
    let (gp, gm) = ghz_overlaps(rho);
    Ok(GhzSymCoords {
        x: 0.5 * (gp - gm),
        y: (gp + gm - 0.25) / SQRT3,
    })
}

/// Projection onto the GHZ-symmetric family: keeps the GHZ± populations and
/// spreads the remaining weight uniformly over the orthogonal complement.
pub fn ghz_symmetrize(rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_three(rho)?;
    let (gp, gm) = ghz_overlaps(rho);
    let rest = (1.0 - gp - gm) / 6.0;
    let mut m = ComplexMatrix::from_real_diagonal(&[rest; 8]);
    let outer = 0.5 * (gp + gm);
    let inner = 0.5 * (gp - gm);
    m[(0, 0)] = Complex64::new(outer, 0.0);
    m[(7, 7)] = Complex64::new(outer, 0.0);
    m[(0, 7)] = Complex64::new(inner, 0.0);
    m[(7, 0)] = Complex64::new(inner, 0.0);
    Ok(DensityMatrix::from_parts_unchecked(3, m))
}

/// Whether `ρ` is invariant under GHZ symmetrization within `tol` (Frobenius).
pub fn is_ghz_symmetric(rho: &DensityMatrix, tol: f64) -> bool {
    match ghz_symmetrize(rho) {
        Ok(s) => s.matrix().distance(rho.matrix()) <= tol,
        Err(_) => false,
    }
}

/// Point of the GHZ/W line at parameter `v ∈ [−1, 1]`.
pub fn ghz_w_line(v: f64) -> Result<GhzSymCoords> {
    if !(-1.0..=1.0).contains(&v) {
        return invalid(format!("GHZ/W line parameter {v} outside [-1, 1]"));
    }
    Ok(ghz_w_point(v))
}

fn ghz_w_point(v: f64) -> GhzSymCoords {
    let v2 = v * v;
    GhzSymCoords {
        x: (v2 * v2 * v + 8.0 * v2 * v) / (8.0 * (4.0 - v2)),
        y: GHZ_VERTEX_Y * (4.0 - v2 - v2 * v2) / (4.0 - v2),
    }
}

/// Intersection of the ray from the GHZ₊ vertex through `(x, y)` with the
/// `v ∈ [0, 1]` half of the GHZ/W line; requires `x ≥ 0`.
fn ghz_w_intersection(x: f64, y: f64) -> GhzSymCoords {
    let (vx, vy) = (0.5, GHZ_VERTEX_Y);
    let (dx, dy) = (x - vx, y - vy);
    let cross = |v: f64| {
        let w = ghz_w_point(v);
        (w.x - vx) * dy - (w.y - vy) * dx
    };
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..BISECTION_MAX_ITER {
        if hi - lo <= BISECTION_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if cross(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ghz_w_point(0.5 * (lo + hi))
}

/// Three-tangle of a GHZ-symmetric state from its triangle coordinates.
///
/// Points with `x < 0` are mirrored onto the GHZ₊ half. The value is
/// `((x − x_W)/(½ − x_W))²` when the point lies between the vertex and the
/// GHZ/W line along the ray from the vertex, and zero beyond the line.
pub fn ghz_sym_three_tangle(c: GhzSymCoords) -> Result<f64> {
    if !c.in_triangle(TRIANGLE_TOL) {
        return invalid(format!("({}, {}) lies outside the GHZ-symmetric triangle", c.x, c.y));
    }
    let x = c.x.abs().min(0.5);
    let y = c.y.min(GHZ_VERTEX_Y);
    if (0.5 - x).abs() < 1e-15 && (GHZ_VERTEX_Y - y).abs() < 1e-15 {
        return Ok(1.0);
    }
    let w = ghz_w_intersection(x, y);
    let ratio = (x - w.x) / (0.5 - w.x);
    if ratio <= 0.0 {
        Ok(0.0)
    } else {
        Ok((ratio * ratio).min(1.0))
    }
}
