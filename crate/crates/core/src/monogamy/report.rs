use std::fmt;

use serde::{Deserialize, Serialize};

use super::chains::IndexChain;
use super::residual::{PureContext, ResidualBudget, ResidualKind, TermStatus};
use crate::error::{invalid, Result};
use crate::linalg::StateVector;

/// Slack tolerance for certification.
pub const SLACK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Inequality {
    Ckw,
    Wsm,
    Mrsm,
    Sm,
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Inequality::Ckw => "ckw",
            Inequality::Wsm => "wsm",
            Inequality::Mrsm => "mrsm",
            Inequality::Sm => "sm",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Certified,
    /// Negative slack, but some term is only a numerical upper bound.
    Inconclusive,
    Violated,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Certified => "certified",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Violated => "violated",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    /// Qubits labelled 1-based in the caller's numbering, focus first.
    pub label: String,
    pub value: f64,
    /// Amount this term adds to the right-hand side.
    pub contribution: f64,
    pub status: TermStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub inequality: Inequality,
    pub n_qubits: usize,
    pub focus: usize,
    pub lhs: f64,
    pub pair_sum: f64,
    pub higher_term: f64,
    /// `lhs − pair_sum − higher_term`; for residual inequalities this is the residual itself.
    pub slack: f64,
    pub higher_status: TermStatus,
    pub breakdown: Vec<Term>,
    /// Maximizing chain for MRSM, in the caller's qubit numbering.
    pub best_chain: Option<IndexChain>,
    pub status: Verdict,
}

fn verdict(slack: f64, higher_status: TermStatus) -> Verdict {
    if slack >= -SLACK_TOL {
        Verdict::Certified
    } else if higher_status == TermStatus::UpperBound {
        Verdict::Inconclusive
    } else {
        Verdict::Violated
    }
}

/// Moves `focus` to qubit 0; returns the state and the local→original map.
fn focus_first(psi: &StateVector, focus: usize) -> Result<(StateVector, Vec<usize>)> {
    let n = psi.n_qubits();
    if focus >= n {
        return invalid(format!("focus qubit {focus} out of range for {n} qubits"));
    }
    let order: Vec<usize> = std::iter::once(focus).chain((0..n).filter(|&q| q != focus)).collect();
    Ok((psi.permute_qubits(&order)?, order))
}

fn label(qubits: &[usize], order: &[usize]) -> String {
    let digits: Vec<String> = qubits.iter().map(|&q| (order[q] + 1).to_string()).collect();
    format!("tau_{}", digits.join(""))
}

fn lhs_label(n: usize, order: &[usize]) -> String {
    let rest: Vec<String> = (1..n).map(|q| (order[q] + 1).to_string()).collect();
    format!("tau_{}({})", order[0] + 1, rest.join(""))
}

struct Lower {
    ctx_lhs: f64,
    pair_sum: f64,
    terms: Vec<Term>,
}

fn lhs_and_pairs(ctx: &mut PureContext<'_>, order: &[usize]) -> Result<Lower> {
    let n = ctx.n_qubits();
    let lhs = ctx.focus_tangle()?;
    let mut terms = vec![Term {
        label: lhs_label(n, order),
        value: lhs,
        contribution: 0.0,
        status: TermStatus::Exact,
    }];
    let mut pair_sum = 0.0;
    for j in 1..n {
        let t = ctx.pair(j)?;
        pair_sum += t;
        terms.push(Term {
            label: label(&[0, j], order),
            value: t,
            contribution: t,
            status: TermStatus::Exact,
        });
    }
    Ok(Lower {
        ctx_lhs: lhs,
        pair_sum,
        terms,
    })
}

/// `τ_{focus|rest} ≥ Σ_j τ_{focus j}`.
pub fn ckw_report(psi: &StateVector, focus: usize) -> Result<InequalityReport> {
    let n = psi.n_qubits();
    if n < 2 {
        return invalid("CKW needs at least two qubits");
    }
    let (local, order) = focus_first(psi, focus)?;
    let kind = ResidualKind::Wsm;
    let budget = ResidualBudget::default();
    let mut ctx = PureContext::new(local, &kind, &budget, 0);
    let lower = lhs_and_pairs(&mut ctx, &order)?;
    let slack = lower.ctx_lhs - lower.pair_sum;
    Ok(InequalityReport {
        inequality: Inequality::Ckw,
        n_qubits: n,
        focus,
        lhs: lower.ctx_lhs,
        pair_sum: lower.pair_sum,
        higher_term: 0.0,
        slack,
        higher_status: TermStatus::Exact,
        breakdown: lower.terms,
        best_chain: None,
        status: verdict(slack, TermStatus::Exact),
    })
}

/// Report for a residual inequality; `slack` is the top-level residual.
pub fn residual_report(
    psi: &StateVector,
    focus: usize,
    kind: &ResidualKind,
    budget: &ResidualBudget,
) -> Result<InequalityReport> {
    let n = psi.n_qubits();
    if n < 3 {
        return invalid(format!("residual inequalities need n >= 3, got {n}"));
    }
    let (local, order) = focus_first(psi, focus)?;
    let mut ctx = PureContext::new(local, kind, budget, 0);
    let mut lower = lhs_and_pairs(&mut ctx, &order)?;
    let all: Vec<usize> = (0..n).collect();
    let higher = ctx.higher(&all)?;
    for (sys, r, contribution) in &higher.parts {
        lower.terms.push(Term {
            label: label(sys, &order),
            value: r.value,
            contribution: *contribution,
            status: r.status,
        });
    }
    let slack = lower.ctx_lhs - lower.pair_sum - higher.value;
    let best_chain = higher.best_chain.map(|c| IndexChain {
        levels: c
            .levels
            .iter()
            .map(|level| level.iter().map(|&q| order[q]).collect())
            .collect(),
    });
    let inequality = match kind {
        ResidualKind::Wsm => Inequality::Wsm,
        ResidualKind::Mrsm => Inequality::Mrsm,
        ResidualKind::Sm { .. } => Inequality::Sm,
    };
    Ok(InequalityReport {
        inequality,
        n_qubits: n,
        focus,
        lhs: lower.ctx_lhs,
        pair_sum: lower.pair_sum,
        higher_term: higher.value,
        slack,
        higher_status: higher.status,
        breakdown: lower.terms,
        best_chain,
        status: verdict(slack, higher.status),
    })
}

pub fn wsm_residual_pure(psi: &StateVector, budget: &ResidualBudget) -> Result<InequalityReport> {
    residual_report(psi, 0, &ResidualKind::Wsm, budget)
}

pub fn mrsm_residual_pure(psi: &StateVector, budget: &ResidualBudget) -> Result<InequalityReport> {
    residual_report(psi, 0, &ResidualKind::Mrsm, budget)
}

/// SM with exponents `mu[k]` for `m = k + 3`; negative residuals count as zero.
pub fn sm_original_rhs(psi: &StateVector, mu: &[f64], budget: &ResidualBudget) -> Result<InequalityReport> {
    let n = psi.n_qubits();
    if mu.len() + 3 < n {
        return invalid(format!("SM on {n} qubits needs {} exponents, got {}", n.saturating_sub(3), mu.len()));
    }
    residual_report(psi, 0, &ResidualKind::sm(mu.to_vec())?, budget)
}
