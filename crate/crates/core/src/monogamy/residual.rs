use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::chains::{binomial, chains, subsets, IndexChain};
use crate::convexroof::{try_roof_from_eigensystem, RoofConfig, RANK_THRESHOLD};
use crate::error::{invalid, Result};
use crate::linalg::{hermitian_eig, kron, partial_trace, partial_trace_pure, DensityMatrix, EigenSystem, StateVector};
use crate::measures::{
    ghz_sym_coords, ghz_sym_three_tangle, hyperdet_three_tangle, is_ghz_symmetric, tangle_of_marginal,
    two_qubit_tangle_mixed,
};

/// Frobenius distance below which a three-qubit state counts as GHZ-symmetric.
pub const GHZ_SYMMETRY_TOL: f64 = 1e-8;
/// Frobenius distance below which `ρ` counts as `ρ_rest ⊗ σ_T`.
pub const FACTORIZATION_TOL: f64 = 1e-9;

/// Which higher-order residual the recursion subtracts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ResidualKind {
    /// Binomially weighted sum over all subsets of each size.
    Wsm,
    /// Maximum over index chains.
    Mrsm,
    /// Plain sums of powered residuals; `exponents[k]` is `μ` for `m = k + 3`.
    Sm { exponents: Vec<f64> },
}

impl ResidualKind {
    /// SM with `μ_m = m/2` for `m = 3..n−1`.
    pub fn sm_default(n: usize) -> Self {
        let exponents = (3..n.max(3)).map(|m| m as f64 / 2.0).collect();
        ResidualKind::Sm { exponents }
    }

    pub fn sm(exponents: Vec<f64>) -> Result<Self> {
        if let Some(mu) = exponents.iter().find(|mu| !(mu.is_finite() && **mu >= 1.0)) {
            return invalid(format!("SM exponents must be finite and >= 1, got {mu}"));
        }
        Ok(ResidualKind::Sm { exponents })
    }

    fn exponent(&self, m: usize) -> Result<f64> {
        match self {
            ResidualKind::Sm { exponents } => match exponents.get(m - 3) {
                Some(&mu) => Ok(mu),
                None => invalid(format!("no SM exponent for m = {m}")),
            },
            _ => Ok(1.0),
        }
    }
}

/// How a residual value was obtained. Ordered from strongest to weakest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermStatus {
    Exact,
    Analytic,
    /// At least one numerical convex-roof estimate went into the value.
    UpperBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub value: f64,
    pub status: TermStatus,
}

impl Residual {
    fn exact(value: f64) -> Self {
        Self { value, status: TermStatus::Exact }
    }
}

/// Roof budgets: `top` for subsystems of the state under study, `nested`
/// for roofs taken inside the functional of another roof.
#[derive(Debug, Clone)]
pub struct ResidualBudget {
    pub top: RoofConfig,
    pub nested: RoofConfig,
}

impl Default for ResidualBudget {
    fn default() -> Self {
        Self {
            top: RoofConfig::default(),
            nested: RoofConfig {
                restarts: 4,
                iterations: 30,
                tol: 1e-4,
                ..RoofConfig::default()
            },
        }
    }
}

impl ResidualBudget {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.top.seed = seed;
        self.nested.seed = seed;
        self
    }

    fn at_depth(&self, depth: usize) -> &RoofConfig {
        if depth == 0 {
            &self.top
        } else {
            &self.nested
        }
    }
}

/// Residuals of one pure state's subsystems, keyed by sorted qubit set.
#[derive(Debug, Clone, Default)]
pub struct ResidualCache {
    entries: HashMap<Vec<usize>, Residual>,
}

impl ResidualCache {
    pub fn get(&self, qubits: &[usize]) -> Option<Residual> {
        self.entries.get(qubits).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Higher-order term of a pure-state residual together with its parts.
#[derive(Debug, Clone)]
pub(crate) struct HigherTerm {
    pub value: f64,
    pub status: TermStatus,
    /// `(subsystem, residual, contribution)` for every subsystem consulted.
    pub parts: Vec<(Vec<usize>, Residual, f64)>,
    pub best_chain: Option<IndexChain>,
}

/// Recursive residual evaluation for one pure state, focus on qubit 0.
pub(crate) struct PureContext<'a> {
    psi: StateVector,
    kind: &'a ResidualKind,
    budget: &'a ResidualBudget,
    depth: usize,
    cache: ResidualCache,
    pairs: Vec<Option<f64>>,
    focus_tangle: Option<f64>,
}

impl<'a> PureContext<'a> {
    pub fn new(psi: StateVector, kind: &'a ResidualKind, budget: &'a ResidualBudget, depth: usize) -> Self {
        let n = psi.n_qubits();
        Self {
            psi,
            kind,
            budget,
            depth,
            cache: ResidualCache::default(),
            pairs: vec![None; n],
            focus_tangle: None,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.psi.n_qubits()
    }

    #[cfg(test)]
    pub fn cache(&self) -> &ResidualCache {
        &self.cache
    }

    pub fn focus_tangle(&mut self) -> Result<f64> {
        if let Some(t) = self.focus_tangle {
            return Ok(t);
        }
        let t = tangle_of_marginal(&partial_trace_pure(&self.psi, &[0])?);
        self.focus_tangle = Some(t);
        Ok(t)
    }

    pub fn pair(&mut self, j: usize) -> Result<f64> {
        if let Some(t) = self.pairs[j] {
            return Ok(t);
        }
        let t = two_qubit_tangle_mixed(&partial_trace_pure(&self.psi, &[0, j])?)?;
        self.pairs[j] = Some(t);
        Ok(t)
    }

    pub fn residual_all(&mut self) -> Result<Residual> {
        let all: Vec<usize> = (0..self.n_qubits()).collect();
        self.residual(&all)
    }

    /// Residual of the reduced state on `sys` (sorted, containing 0).
    pub fn residual(&mut self, sys: &[usize]) -> Result<Residual> {
        if let Some(r) = self.cache.get(sys) {
            return Ok(r);
        }
        let r = match sys.len() {
            0 | 1 => return invalid(format!("residual needs at least two qubits, got {sys:?}")),
            2 => Residual::exact(self.pair(sys[1])?),
            s if s == self.n_qubits() => self.pure_residual(sys)?,
            _ => {
                let rho = partial_trace_pure(&self.psi, sys)?;
                let eig = hermitian_eig(rho.matrix())?;
                if eig.rank(RANK_THRESHOLD) == 1 {
                    self.pure_residual(sys)?
                } else {
                    mixed_residual(&rho, &eig, self.kind, self.budget, self.depth)?
                }
            }
        };
        self.cache.entries.insert(sys.to_vec(), r);
        Ok(r)
    }

    /// Valid only when the reduced state on `sys` is pure, so that its
    /// focus marginal and two-qubit marginals are those of `psi`.
    fn pure_residual(&mut self, sys: &[usize]) -> Result<Residual> {
        let lhs = self.focus_tangle()?;
        let mut pairs = 0.0;
        for &j in &sys[1..] {
            pairs += self.pair(j)?;
        }
        let higher = self.higher(sys)?;
        Ok(Residual {
            value: lhs - pairs - higher.value,
            status: higher.status,
        })
    }

    pub fn higher(&mut self, sys: &[usize]) -> Result<HigherTerm> {
        let s = sys.len();
        let rest = &sys[1..];
        let mut term = HigherTerm {
            value: 0.0,
            status: TermStatus::Exact,
            parts: Vec::new(),
            best_chain: None,
        };
        if s <= 3 {
            return Ok(term);
        }
        let with_focus = |sub: &[usize]| {
            let mut v = Vec::with_capacity(sub.len() + 1);
            v.push(0);
            v.extend_from_slice(sub);
            v
        };
        match self.kind {
            ResidualKind::Wsm | ResidualKind::Sm { .. } => {
                for m in 3..s {
                    let weight = match self.kind {
                        ResidualKind::Wsm => 1.0 / binomial((s - 1) as u64, (m - 1) as u64) as f64,
                        _ => 1.0,
                    };
                    let mu = self.kind.exponent(m)?;
                    for sub in subsets(rest, m - 1) {
                        let key = with_focus(&sub);
                        let r = self.residual(&key)?;
                        let contribution = match self.kind {
                            ResidualKind::Wsm => weight * r.value,
                            _ => r.value.max(0.0).powf(mu),
                        };
                        term.value += contribution;
                        term.status = term.status.max(r.status);
                        term.parts.push((key, r, contribution));
                    }
                }
            }
            ResidualKind::Mrsm => {
                let mut best: Option<(f64, IndexChain)> = None;
                for local in chains(s)? {
                    let chain = IndexChain {
                        levels: local
                            .levels
                            .iter()
                            .map(|level| level.iter().map(|&i| rest[i - 1]).collect())
                            .collect(),
                    };
                    let mut total = 0.0;
                    for key in chain.subsystems() {
                        let r = self.residual(&key)?;
                        total += r.value;
                        term.status = term.status.max(r.status);
                    }
                    if best.as_ref().is_none_or(|(v, _)| total > *v) {
                        best = Some((total, chain));
                    }
                }
                let (value, chain) = best.expect("at least one chain for s >= 4");
                for m in 3..s {
                    for sub in subsets(rest, m - 1) {
                        let key = with_focus(&sub);
                        let r = self.residual(&key)?;
                        let on_chain = chain.subsystems().any(|c| c == key);
                        term.parts.push((key, r, if on_chain { r.value } else { 0.0 }));
                    }
                }
                term.value = value;
                term.best_chain = Some(chain);
            }
        }
        Ok(term)
    }
}

/// Whether `rho = ρ_rest ⊗ σ_T` for some nonempty set `T` of non-focus qubits.
pub fn factorizes(rho: &DensityMatrix, tol: f64) -> Result<bool> {
    let n = rho.n_qubits();
    for mask in 1usize..(1 << (n - 1)) {
        let t: Vec<usize> = (1..n).filter(|q| mask >> (q - 1) & 1 == 1).collect();
        let rest: Vec<usize> = (0..n).filter(|q| !t.contains(q)).collect();
        let order: Vec<usize> = rest.iter().chain(&t).copied().collect();
        let permuted = partial_trace(rho, &order)?;
        let product = kron(partial_trace(rho, &rest)?.matrix(), partial_trace(rho, &t)?.matrix());
        if permuted.matrix().distance(&product) < tol {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Residual of a (generally mixed) state with focus on qubit 0.
///
/// Exact for two qubits and rank one, analytic for GHZ-symmetric three-qubit
/// states and product cuts where the residual is known to vanish; otherwise a
/// numerical convex-roof upper bound.
pub fn residual_for_subsystem(rho: &DensityMatrix, kind: &ResidualKind, budget: &ResidualBudget) -> Result<Residual> {
    if rho.n_qubits() < 2 {
        return invalid(format!("residual needs at least two qubits, got {}", rho.n_qubits()));
    }
    let eig = hermitian_eig(rho.matrix())?;
    mixed_residual(rho, &eig, kind, budget, 0)
}

fn mixed_residual(
    rho: &DensityMatrix,
    eig: &EigenSystem,
    kind: &ResidualKind,
    budget: &ResidualBudget,
    depth: usize,
) -> Result<Residual> {
    let s = rho.n_qubits();
    if s == 2 {
        return Ok(Residual::exact(two_qubit_tangle_mixed(rho)?));
    }
    if eig.rank(RANK_THRESHOLD) == 1 {
        let psi = StateVector::from_unnormalized(eig.eigenvector(0))?;
        return PureContext::new(psi, kind, budget, depth).residual_all();
    }
    let analytic = |value| Residual {
        value,
        status: TermStatus::Analytic,
    };
    if s == 3 && is_ghz_symmetric(rho, GHZ_SYMMETRY_TOL) {
        return Ok(analytic(ghz_sym_three_tangle(ghz_sym_coords(rho)?)?));
    }
    if (s == 3 || *kind == ResidualKind::Mrsm) && factorizes(rho, FACTORIZATION_TOL)? {
        return Ok(analytic(0.0));
    }
    let cfg = budget.at_depth(depth);
    let estimate = if s == 3 {
        try_roof_from_eigensystem(eig, rho, |psi| Ok(hyperdet_three_tangle(psi.amplitudes())), cfg)?
    } else {
        try_roof_from_eigensystem(
            eig,
            rho,
            |psi| Ok(PureContext::new(psi.clone(), kind, budget, depth + 1).residual_all()?.value),
            cfg,
        )?
    };
    Ok(Residual {
        value: estimate.value,
        status: TermStatus::UpperBound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::ghz;
    use crate::linalg::haar_random_pure;
    use crate::measures::pure_three_tangle;

    fn quick_budget() -> ResidualBudget {
        let small = RoofConfig {
            restarts: 4,
            iterations: 40,
            tol: 1e-5,
            ..RoofConfig::default()
        };
        ResidualBudget {
            top: small.clone(),
            nested: small,
        }
    }

    #[test]
    fn three_qubit_pure_residual_is_three_tangle() {
        let budget = quick_budget();
        for seed in 0..10 {
            let psi = haar_random_pure(3, seed).unwrap();
            for kind in [ResidualKind::Wsm, ResidualKind::Mrsm, ResidualKind::sm_default(3)] {
                let r = PureContext::new(psi.clone(), &kind, &budget, 0).residual_all().unwrap();
                assert_eq!(r.status, TermStatus::Exact);
                let oracle = hyperdet_three_tangle(psi.amplitudes());
                assert!((r.value - oracle).abs() < 1e-9, "{} vs {oracle}", r.value);
            }
        }
    }

    #[test]
    fn ghz_residuals() {
        let budget = quick_budget();
        let kind = ResidualKind::Mrsm;
        let r3 = PureContext::new(ghz(3).unwrap(), &kind, &budget, 0).residual_all().unwrap();
        assert!((r3.value - 1.0).abs() < 1e-12);
        // Every reduced state of GHZ_4 is separable and GHZ-symmetric with zero tangle.
        let mut ctx = PureContext::new(ghz(4).unwrap(), &kind, &budget, 0);
        let r4 = ctx.residual_all().unwrap();
        assert!((r4.value - 1.0).abs() < 1e-9);
        assert_eq!(r4.status, TermStatus::Analytic);
    }

    #[test]
    fn mixed_three_qubit_matches_pure_formula_on_rank_one() {
        let psi = haar_random_pure(3, 5).unwrap();
        let r = residual_for_subsystem(&psi.density(), &ResidualKind::Wsm, &quick_budget()).unwrap();
        assert!((r.value - pure_three_tangle(&psi).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn factorization_detection() {
        let a = haar_random_pure(2, 1).unwrap();
        let b = haar_random_pure(1, 2).unwrap();
        let product = a.density().tensor(&b.density());
        assert!(factorizes(&product, FACTORIZATION_TOL).unwrap());
        let entangled = haar_random_pure(4, 3).unwrap();
        let rho = partial_trace_pure(&entangled, &[0, 1, 2]).unwrap();
        assert!(!factorizes(&rho, FACTORIZATION_TOL).unwrap());
    }

    #[test]
    fn cache_is_idempotent() {
        let psi = haar_random_pure(4, 11).unwrap();
        let kind = ResidualKind::Wsm;
        let budget = quick_budget();
        let mut ctx = PureContext::new(psi, &kind, &budget, 0);
        let first = ctx.residual_all().unwrap();
        let size = ctx.cache().len();
        let second = ctx.residual_all().unwrap();
        assert_eq!(first, second);
        assert_eq!(size, ctx.cache().len());
        assert!(ctx.cache().get(&[0, 1, 2]).is_some());
    }

    #[test]
    fn sm_exponent_validation() {
        assert!(ResidualKind::sm(vec![1.5, 2.0]).is_ok());
        assert!(ResidualKind::sm(vec![0.5]).is_err());
        assert!(ResidualKind::sm(vec![f64::NAN]).is_err());
        assert_eq!(ResidualKind::sm_default(5), ResidualKind::Sm { exponents: vec![1.5, 2.0] });
    }
}
