//! State families: GHZ states, the nine four-qubit SLOCC normal forms with
//! their reduced three-tangle bounds, the mixed family `ρ_p`, its phase
//! superpositions, the five-qubit `|Ψ⟩_p`, and the closed-form curves
//! attached to them.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, StateVector};

const DET_TOL: f64 = 1e-10;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Basis index of a bit string such as `"0110"` (first character is qubit 0).
fn ket(bits: &str) -> usize {
    usize::from_str_radix(bits, 2).expect("basis label must be binary")
}

fn check_unit_interval(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("parameter p = {p} outside [0, 1]"));
    }
    Ok(())
}

/// `(|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz(n: usize) -> Result<StateVector> {
    if n < 2 {
        return invalid(format!("GHZ state needs at least 2 qubits, got {n}"));
    }
    let mut amps = vec![c(0.0); 1 << n];
    amps[0] = c(FRAC_1_SQRT_2);
    amps[(1 << n) - 1] = c(FRAC_1_SQRT_2);
    StateVector::new(amps)
}

/// `|−⟩ = (|0⟩ − |1⟩)/√2`.
pub fn minus() -> StateVector {
    StateVector::new(vec![c(FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2)]).expect("normalized")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormalFormFamily {
    G1,
    G2,
    G3,
    G4,
    G5,
    G6,
    G7,
    G8,
    G9,
}

impl NormalFormFamily {
    pub const ALL: [NormalFormFamily; 9] = [
        Self::G1,
        Self::G2,
        Self::G3,
        Self::G4,
        Self::G5,
        Self::G6,
        Self::G7,
        Self::G8,
        Self::G9,
    ];

    pub fn index(self) -> usize {
        self as usize + 1
    }

    pub fn from_index(x: usize) -> Result<Self> {
        Self::ALL
            .get(x.wrapping_sub(1))
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("normal-form family {x} not in 1..=9")))
    }
}

impl fmt::Display for NormalFormFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G{}", self.index())
    }
}

impl FromStr for NormalFormFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s.trim_start_matches(['G', 'g']);
        let x: usize = digits
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("unknown normal-form family {s:?}")))?;
        Self::from_index(x)
    }
}

/// Parameters of a normal form; entries a family does not use are ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalFormParams {
    pub family: NormalFormFamily,
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl NormalFormParams {
    pub fn new(family: NormalFormFamily, a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c), ("d", d)] {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return invalid(format!("parameter {name} must be finite"));
            }
            if v.re < 0.0 {
                return invalid(format!("parameter {name} = {v} has a negative real part"));
            }
        }
        Ok(Self { family, a, b, c, d })
    }

    /// Real parameters, with unused trailing entries set to zero.
    pub fn real(family: NormalFormFamily, abcd: &[f64]) -> Result<Self> {
        let get = |i: usize| c(abcd.get(i).copied().unwrap_or(0.0));
        Self::new(family, get(0), get(1), get(2), get(3))
    }
}

/// Normalized representative `|G^x⟩` of a normal-form family.
pub fn normal_form(p: &NormalFormParams) -> Result<StateVector> {
    let (a, b, cc, d) = (p.a, p.b, p.c, p.d);
    let i = Complex64::new(0.0, 1.0);
    let one = c(1.0);
    let half = 0.5;
    let terms: Vec<(Complex64, &[&str])> = match p.family {
        NormalFormFamily::G1 => vec![
            ((a + d) * half, &["0000", "1111"]),
            ((a - d) * half, &["0011", "1100"]),
            ((b + cc) * half, &["0101", "1010"]),
            ((b - cc) * half, &["0110", "1001"]),
        ],
        NormalFormFamily::G2 => vec![
            ((a + b) * half, &["0000", "1111"]),
            ((a - b) * half, &["0011", "1100"]),
            (cc, &["0101", "1010"]),
            (one, &["0110"]),
        ],
        NormalFormFamily::G3 => vec![
            (a, &["0000", "1111"]),
            (b, &["0101", "1010"]),
            (one, &["0110", "0011"]),
        ],
        NormalFormFamily::G4 => vec![
            (a, &["0000", "1111"]),
            ((a + b) * half, &["0101", "1010"]),
            ((a - b) * half, &["0110", "1001"]),
            (i * FRAC_1_SQRT_2, &["0001", "0010", "0111", "1011"]),
        ],
        NormalFormFamily::G5 => vec![
            (a, &["0000", "0101", "1010", "1111"]),
            (i, &["0001"]),
            (one, &["0110"]),
            (-i, &["1011"]),
        ],
        NormalFormFamily::G6 => vec![(a, &["0000", "1111"]), (one, &["0011", "0101", "0110"])],
        NormalFormFamily::G7 => vec![(one, &["0000", "0101", "1000", "1110"])],
        NormalFormFamily::G8 => vec![(one, &["0000", "1011", "1101", "1110"])],
        NormalFormFamily::G9 => vec![(one, &["0000", "0111"])],
    };
    let mut amps = vec![c(0.0); 16];
    for (coeff, kets) in terms {
        for k in kets {
            amps[ket(k)] += coeff;
        }
    }
    StateVector::from_unnormalized(amps)
        .map_err(|_| Error::InvalidArgument(format!("{} parameters give the zero vector", p.family)))
}

/// Four determinant-one local operations `A₁ ⊗ A₂ ⊗ A₃ ⊗ A₄`.
#[derive(Debug, Clone)]
pub struct SlocOps {
    ops: [ComplexMatrix; 4],
}

impl SlocOps {
    pub fn new(ops: [ComplexMatrix; 4]) -> Result<Self> {
        for (k, a) in ops.iter().enumerate() {
            if a.rows() != 2 || a.cols() != 2 {
                return invalid(format!("A_{} must be 2x2", k + 1));
            }
            let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
            if (det - 1.0).norm() > DET_TOL {
                return invalid(format!("det A_{} = {det} differs from 1", k + 1));
            }
        }
        Ok(Self { ops })
    }

    pub fn identity() -> Self {
        Self {
            ops: std::array::from_fn(|_| ComplexMatrix::identity(2)),
        }
    }

    pub fn ops(&self) -> &[ComplexMatrix; 4] {
        &self.ops
    }
}

/// Normalized image `(A₁ ⊗ A₂ ⊗ A₃ ⊗ A₄)|ψ⟩` of a four-qubit state.
pub fn apply_slocc(psi: &StateVector, ops: &SlocOps) -> Result<StateVector> {
    if psi.n_qubits() != 4 {
        return invalid(format!("SLOCC operations act on 4 qubits, got {}", psi.n_qubits()));
    }
    let mut amps = psi.amplitudes().to_vec();
    for (q, a) in ops.ops.iter().enumerate() {
        let shift = 3 - q;
        for idx in 0..16 {
            if (idx >> shift) & 1 == 0 {
                let partner = idx | (1 << shift);
                let (x0, x1) = (amps[idx], amps[partner]);
                amps[idx] = a[(0, 0)] * x0 + a[(0, 1)] * x1;
                amps[partner] = a[(1, 0)] * x0 + a[(1, 1)] * x1;
            }
        }
    }
    StateVector::from_unnormalized(amps)
        .map_err(|_| Error::InvalidArgument("SLOCC image is the zero vector".into()))
}

/// Reduced three-tangle `τ_{q₁ j k}` of a four-qubit state, focus on qubit 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Triple {
    Q123,
    Q124,
    Q134,
}

impl Triple {
    pub const ALL: [Triple; 3] = [Triple::Q123, Triple::Q124, Triple::Q134];

    /// Zero-based qubit indices.
    pub fn qubits(self) -> [usize; 3] {
        match self {
            Triple::Q123 => [0, 1, 2],
            Triple::Q124 => [0, 1, 3],
            Triple::Q134 => [0, 2, 3],
        }
    }
}

/// Tabulated upper bound on a reduced three-tangle of classes G2–G5.
/// Evaluated on the raw (unnormalized) parameters.
pub fn table1_bound(p: &NormalFormParams, triple: Triple) -> Result<f64> {
    let (a, b, cc) = (p.a, p.b, p.c);
    let (na, nb, nc) = (a.norm(), b.norm(), cc.norm());
    let value = match p.family {
        NormalFormFamily::G2 => {
            let denom = na * na + nb * nb + 2.0 * nc * nc + 1.0;
            4.0 * nc * (a * a - b * b).norm() / (denom * denom)
        }
        NormalFormFamily::G3 => match triple {
            Triple::Q123 | Triple::Q134 => 0.0,
            Triple::Q124 => {
                let denom = 1.0 + na * na + nb * nb;
                4.0 * na * nb / (denom * denom)
            }
        },
        NormalFormFamily::G4 => {
            let denom = 2.0 + 3.0 * na * na + nb * nb;
            2.0 * (a * a - b * b).norm() / (denom * denom)
        }
        NormalFormFamily::G5 => {
            let denom = 3.0 + 4.0 * na * na;
            match triple {
                Triple::Q123 | Triple::Q134 => 16.0 * na * na / (denom * denom),
                Triple::Q124 => 4.0 / (denom * denom),
            }
        }
        other => return invalid(format!("no tabulated three-tangle bounds for {other}")),
    };
    Ok(value)
}

/// Parameter ties of the tightness sweep: class 2 uses `c = b + 1 = a`,
/// class 3 `b = a/4`, class 4 `b = a/2`, class 5 has `a` only.
pub fn sweep_params(class: usize, a: f64) -> Result<NormalFormParams> {
    match class {
        2 => {
            if a < 1.0 {
                return invalid(format!("class 2 sweep needs a >= 1 so that b = a - 1 >= 0, got {a}"));
            }
            NormalFormParams::real(NormalFormFamily::G2, &[a, a - 1.0, a])
        }
        3 => NormalFormParams::real(NormalFormFamily::G3, &[a, a / 4.0]),
        4 => NormalFormParams::real(NormalFormFamily::G4, &[a, a / 2.0]),
        5 => NormalFormParams::real(NormalFormFamily::G5, &[a]),
        _ => invalid(format!("tightness sweep supports classes 2..=5, got {class}")),
    }
}

/// `(1−p)|GHZ₄⟩⟨GHZ₄| + p |GHZ₃⟩⟨GHZ₃| ⊗ |−⟩⟨−|`.
pub fn rho_p(p: f64) -> Result<DensityMatrix> {
    check_unit_interval(p)?;
    let ghz4 = ghz(4)?;
    let ghz3_minus = ghz(3)?.tensor(&minus());
    DensityMatrix::mixture(&[1.0 - p, p], &[ghz4, ghz3_minus])
}

/// `√(1−p)|GHZ₄⟩ + √p e^{iφ}|GHZ₃⟩|−⟩`.
pub fn psi_p_pure(p: f64, phi: f64) -> Result<StateVector> {
    check_unit_interval(p)?;
    let ghz4 = ghz(4)?;
    let ghz3_minus = ghz(3)?.tensor(&minus());
    let phase = Complex64::from_polar(p.sqrt(), phi);
    let a = (1.0 - p).sqrt();
    let amps = ghz4
        .amplitudes()
        .iter()
        .zip(ghz3_minus.amplitudes())
        .map(|(x, y)| x * a + y * phase)
        .collect();
    StateVector::from_unnormalized(amps)
}

/// `√(1−p)|GHZ₄⟩|0⟩ + √p|GHZ₃⟩|−⟩|1⟩`.
pub fn five_qubit_psi(p: f64) -> Result<StateVector> {
    check_unit_interval(p)?;
    let zero = StateVector::basis(1, 0)?;
    let one = StateVector::basis(1, 1)?;
    let left = ghz(4)?.tensor(&zero);
    let right = ghz(3)?.tensor(&minus()).tensor(&one);
    let (a, b) = ((1.0 - p).sqrt(), p.sqrt());
    let amps = left
        .amplitudes()
        .iter()
        .zip(right.amplitudes())
        .map(|(x, y)| x * a + y * b)
        .collect();
    StateVector::from_unnormalized(amps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveFamily {
    RhoP,
    FiveQubit,
}

/// Closed-form entanglement values along a family, keyed by label.
#[derive(Debug, Clone, PartialEq)]
pub struct Curves {
    pub entries: Vec<(&'static str, f64)>,
}

impl Curves {
    pub fn get(&self, label: &str) -> Option<f64> {
        self.entries.iter().find(|(l, _)| *l == label).map(|&(_, v)| v)
    }
}

/// For `ρ_p`: `tau_A_BCD = 1−2p+2p²`, `tau_ABC = p²`, `tau_ABCD = (1−p)²`.
/// For `|Ψ⟩_p`: `tau_123 = p²`, `tau_1234 = (1−p)²`, `tau_1235 = 2p(1−p)`,
/// `tau4max` the larger of the two, `tau_12345 = 1 − tau4max − p²`.
pub fn analytic_curves(which: CurveFamily, p: f64) -> Result<Curves> {
    check_unit_interval(p)?;
    let q = 1.0 - p;
    let entries = match which {
        CurveFamily::RhoP => vec![
            ("tau_A_BCD", 1.0 - 2.0 * p + 2.0 * p * p),
            ("tau_ABC", p * p),
            ("tau_ABCD", q * q),
        ],
        CurveFamily::FiveQubit => {
            let t1234 = q * q;
            let t1235 = 2.0 * p * q;
            let t4 = t1234.max(t1235);
            vec![
                ("tau_1_2345", 1.0),
                ("tau_123", p * p),
                ("tau_1234", t1234),
                ("tau_1235", t1235),
                ("tau4max", t4),
                ("tau_12345", 1.0 - t4 - p * p),
            ]
        }
    };
    Ok(Curves { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{partial_trace, partial_trace_pure};
    use crate::measures::{one_tangle, pure_three_tangle, two_qubit_tangle_mixed};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn ghz_constructors() {
        let bell = ghz(2).unwrap();
        assert!(close(bell.norm(), 1.0, 1e-15));
        assert!(close(one_tangle(&ghz(4).unwrap(), &[0]).unwrap(), 1.0, 1e-14));
        assert!(close(pure_three_tangle(&ghz(3).unwrap()).unwrap(), 1.0, 1e-10));
        assert!(ghz(1).is_err());
    }

    #[test]
    fn g1_reduces_to_ghz() {
        let p = NormalFormParams::real(NormalFormFamily::G1, &[1.0, 0.0, 0.0, 1.0]).unwrap();
        let s = normal_form(&p).unwrap();
        assert!(close(s.inner(&ghz(4).unwrap()).norm(), 1.0, 1e-14));
    }

    #[test]
    fn g9_first_qubit_factors_out() {
        let p = NormalFormParams::real(NormalFormFamily::G9, &[]).unwrap();
        let s = normal_form(&p).unwrap();
        let mut expected = vec![c(0.0); 16];
        expected[0] = c(FRAC_1_SQRT_2);
        expected[ket("0111")] = c(FRAC_1_SQRT_2);
        assert!(s.amplitudes().iter().zip(&expected).all(|(x, y)| (x - y).norm() < 1e-15));
        assert!(one_tangle(&s, &[0]).unwrap().abs() < 1e-14);
    }

    #[test]
    fn g5_at_zero_is_well_defined() {
        let p = NormalFormParams::real(NormalFormFamily::G5, &[0.0]).unwrap();
        let s = normal_form(&p).unwrap();
        assert!(close(s.norm(), 1.0, 1e-14));
        let t = one_tangle(&s, &[0]).unwrap();
        assert!((0.0..=1.0).contains(&t));
    }

    #[test]
    fn every_family_normalizes() {
        for fam in NormalFormFamily::ALL {
            let p = NormalFormParams::new(
                fam,
                Complex64::new(0.7, 0.2),
                Complex64::new(0.3, -0.4),
                Complex64::new(1.1, 0.0),
                Complex64::new(0.5, 0.5),
            )
            .unwrap();
            assert!(close(normal_form(&p).unwrap().norm(), 1.0, 1e-14), "{fam}");
        }
    }

    #[test]
    fn degenerate_g1_rejected() {
        let p = NormalFormParams::real(NormalFormFamily::G1, &[0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(normal_form(&p).is_err());
        assert!(NormalFormParams::real(NormalFormFamily::G1, &[-1.0]).is_err());
    }

    #[test]
    fn family_parsing() {
        assert_eq!("G4".parse::<NormalFormFamily>().unwrap(), NormalFormFamily::G4);
        assert_eq!("7".parse::<NormalFormFamily>().unwrap(), NormalFormFamily::G7);
        assert!("G10".parse::<NormalFormFamily>().is_err());
        assert!("G0".parse::<NormalFormFamily>().is_err());
    }

    #[test]
    fn identity_slocc_is_noop() {
        let s = normal_form(&NormalFormParams::real(NormalFormFamily::G6, &[0.4]).unwrap()).unwrap();
        let out = apply_slocc(&s, &SlocOps::identity()).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn diagonal_slocc_on_first_qubit() {
        // diag(2, 1/2) on qubit 0 of GHZ₄ gives 2|0000⟩ + ½|1111⟩ ∝ 4|0000⟩ + |1111⟩.
        let mut ops: [ComplexMatrix; 4] = std::array::from_fn(|_| ComplexMatrix::identity(2));
        ops[0] = ComplexMatrix::from_real_diagonal(&[2.0, 0.5]);
        let out = apply_slocc(&ghz(4).unwrap(), &SlocOps::new(ops).unwrap()).unwrap();
        let n = 17f64.sqrt();
        assert!(close(out.amplitudes()[0].re, 4.0 / n, 1e-14));
        assert!(close(out.amplitudes()[15].re, 1.0 / n, 1e-14));
    }

    #[test]
    fn slocc_rejects_bad_determinant() {
        let mut ops: [ComplexMatrix; 4] = std::array::from_fn(|_| ComplexMatrix::identity(2));
        ops[2] = ComplexMatrix::from_real_diagonal(&[2.0, 2.0]);
        assert!(SlocOps::new(ops).is_err());
    }

    #[test]
    fn table1_values() {
        let g5 = NormalFormParams::real(NormalFormFamily::G5, &[0.0]).unwrap();
        assert!(close(table1_bound(&g5, Triple::Q124).unwrap(), 4.0 / 9.0, 1e-15));
        assert_eq!(table1_bound(&g5, Triple::Q123).unwrap(), 0.0);
        let g4 = NormalFormParams::real(NormalFormFamily::G4, &[0.8, 0.8]).unwrap();
        assert_eq!(table1_bound(&g4, Triple::Q134).unwrap(), 0.0);
        let g3 = NormalFormParams::real(NormalFormFamily::G3, &[2.0, 0.5]).unwrap();
        assert!(close(table1_bound(&g3, Triple::Q124).unwrap(), 4.0 / 27.5625, 1e-15));
        assert_eq!(table1_bound(&g3, Triple::Q123).unwrap(), 0.0);
        assert_eq!(table1_bound(&g3, Triple::Q134).unwrap(), 0.0);
        let g1 = NormalFormParams::real(NormalFormFamily::G1, &[1.0]).unwrap();
        assert!(table1_bound(&g1, Triple::Q123).is_err());
    }

    #[test]
    fn g2_bound_uses_complex_modulus() {
        // √((a²−b²)(a*²−b*²)) = |a²−b²| for complex a, b.
        let p = NormalFormParams::new(
            NormalFormFamily::G2,
            Complex64::new(1.0, 0.5),
            Complex64::new(0.2, -0.3),
            Complex64::new(0.6, 0.0),
            c(0.0),
        )
        .unwrap();
        let (a, b) = (p.a, p.b);
        let root = ((a * a - b * b) * (a.conj() * a.conj() - b.conj() * b.conj())).sqrt();
        let denom = a.norm_sqr() + b.norm_sqr() + 2.0 * p.c.norm_sqr() + 1.0;
        let expected = 4.0 * p.c.norm() * root.re / (denom * denom);
        assert!(close(table1_bound(&p, Triple::Q123).unwrap(), expected, 1e-14));
    }

    #[test]
    fn rho_p_structure() {
        let r0 = rho_p(0.0).unwrap();
        assert!(r0.matrix().distance(ghz(4).unwrap().density().matrix()) < 1e-15);
        let ghz4 = ghz(4).unwrap();
        let other = ghz(3).unwrap().tensor(&minus());
        assert!(ghz4.inner(&other).norm() < 1e-15);
        for &p in &[0.0, 0.3, 0.5, 1.0] {
            let rho = rho_p(p).unwrap();
            assert!(close(rho.matrix().trace().re, 1.0, 1e-14));
            for pair in [[0, 1], [0, 2], [0, 3]] {
                let red = partial_trace(&rho, &pair).unwrap();
                assert!(two_qubit_tangle_mixed(&red).unwrap() < 1e-12);
            }
        }
        assert!(rho_p(1.2).is_err());
    }

    #[test]
    fn psi_p_tangle_formula() {
        for &p in &[0.0, 0.1, 0.25, 0.5, 0.8, 1.0] {
            for k in 0..8 {
                let phi = k as f64 * 0.4;
                let t = one_tangle(&psi_p_pure(p, phi).unwrap(), &[0]).unwrap();
                let expected = 1.0 - p * (1.0 - p) * (1.0 + (2.0 * phi).cos());
                assert!(close(t, expected, 1e-9), "p={p} φ={phi}: {t} vs {expected}");
            }
        }
        let t = one_tangle(&psi_p_pure(0.5, std::f64::consts::FRAC_PI_2).unwrap(), &[0]).unwrap();
        assert!(close(t, 1.0, 1e-12));
    }

    #[test]
    fn five_qubit_reductions() {
        for &p in &[0.0, 0.2, 0.5, 0.9, 1.0] {
            let psi = five_qubit_psi(p).unwrap();
            assert!(close(one_tangle(&psi, &[0]).unwrap(), 1.0, 1e-12));
            let r1234 = partial_trace_pure(&psi, &[0, 1, 2, 3]).unwrap();
            assert!(r1234.matrix().distance(rho_p(p).unwrap().matrix()) < 1e-12);
            for j in 1..5 {
                let pair = partial_trace_pure(&psi, &[0, j]).unwrap();
                assert!(two_qubit_tangle_mixed(&pair).unwrap() < 1e-12);
            }
        }
        let end = five_qubit_psi(1.0).unwrap();
        let r123 = partial_trace_pure(&end, &[0, 1, 2]).unwrap();
        assert!(r123.matrix().distance(ghz(3).unwrap().density().matrix()) < 1e-14);
    }

    #[test]
    fn analytic_curve_values() {
        let r = analytic_curves(CurveFamily::RhoP, 0.0).unwrap();
        assert_eq!((r.get("tau_A_BCD"), r.get("tau_ABC"), r.get("tau_ABCD")), (Some(1.0), Some(0.0), Some(1.0)));
        let f = analytic_curves(CurveFamily::FiveQubit, 0.5).unwrap();
        assert!(close(f.get("tau_12345").unwrap(), 0.25, 1e-15));
        for p in [0.0, 1.0] {
            let f = analytic_curves(CurveFamily::FiveQubit, p).unwrap();
            assert!(f.get("tau_12345").unwrap().abs() < 1e-15);
        }
        assert!(analytic_curves(CurveFamily::RhoP, -0.1).is_err());
    }

    #[test]
    fn rho_p_curves_are_consistent() {
        for k in 0..=1000 {
            let p = k as f64 / 1000.0;
            let r = analytic_curves(CurveFamily::RhoP, p).unwrap();
            let diff = r.get("tau_A_BCD").unwrap() - r.get("tau_ABC").unwrap();
            assert!(close(r.get("tau_ABCD").unwrap(), diff, 1e-15));
            let f = analytic_curves(CurveFamily::FiveQubit, p).unwrap();
            assert!(f.get("tau_12345").unwrap() >= -1e-15);
        }
    }

    #[test]
    fn sweep_ties() {
        let p = sweep_params(2, 2.0).unwrap();
        assert_eq!((p.a.re, p.b.re, p.c.re), (2.0, 1.0, 2.0));
        assert!(sweep_params(2, 0.5).is_err());
        assert_eq!(sweep_params(3, 2.0).unwrap().b.re, 0.5);
        assert_eq!(sweep_params(4, 2.0).unwrap().b.re, 1.0);
        assert!(sweep_params(6, 1.0).is_err());
    }
}
