use std::fmt::Write as _;

use monogamy_core::linalg::partial_trace;
use monogamy_core::monogamy::{
    ckw_report, residual_for_subsystem, residual_report, Inequality, InequalityReport, ResidualBudget, TermStatus,
    Verdict, SLACK_TOL,
};
use serde::Serialize;

use crate::audit::residual_kind;
use crate::state_file::ParsedState;
use crate::{usage, Result};

pub const EXIT_CERTIFIED: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;

/// Residual of a mixed input, focus moved to the front.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsystemReport {
    pub inequality: Inequality,
    pub n_qubits: usize,
    pub focus: usize,
    pub residual: f64,
    pub residual_status: TermStatus,
    pub status: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Evaluation {
    Pure(InequalityReport),
    Mixed(SubsystemReport),
}

impl Evaluation {
    pub fn verdict(&self) -> Verdict {
        match self {
            Evaluation::Pure(r) => r.status,
            Evaluation::Mixed(r) => r.status,
        }
    }

    /// 0 certified, 2 inconclusive, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self.verdict() {
            Verdict::Certified => EXIT_CERTIFIED,
            Verdict::Inconclusive => EXIT_INCONCLUSIVE,
            Verdict::Violated => EXIT_ERROR,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// Aligned human-readable table.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        match self {
            Evaluation::Pure(r) => {
                let _ = writeln!(s, "{} on {} qubits, focus qubit {}", r.inequality, r.n_qubits, r.focus + 1);
                for t in &r.breakdown {
                    let _ = writeln!(s, "  {:<14} {:>16.12} {:>16.12}  {:?}", t.label, t.value, t.contribution, t.status);
                }
                let _ = writeln!(s, "  lhs {:.12}  pairs {:.12}  higher {:.12}", r.lhs, r.pair_sum, r.higher_term);
                let _ = writeln!(s, "  slack {:.12}  -> {}", r.slack, r.status);
            }
            Evaluation::Mixed(r) => {
                let _ = writeln!(s, "{} residual of a {}-qubit mixed state, focus qubit {}", r.inequality, r.n_qubits, r.focus + 1);
                let _ = writeln!(s, "  residual {:.12} ({:?}) -> {}", r.residual, r.residual_status, r.status);
            }
        }
        s
    }
}

pub fn evaluate_state(
    state: &ParsedState,
    inequality: Inequality,
    focus: usize,
    budget: &ResidualBudget,
) -> Result<Evaluation> {
    let n = state.n_qubits();
    if focus >= n {
        return usage(format!("focus qubit {} out of range for {n} qubits", focus + 1));
    }
    let kind = residual_kind(inequality, n);
    match (state, kind) {
        (ParsedState::Pure(psi), None) => Ok(Evaluation::Pure(ckw_report(psi, focus)?)),
        (ParsedState::Pure(psi), Some(kind)) => {
            if !(3..=6).contains(&n) {
                return usage(format!("{inequality} needs 3 to 6 qubits, got {n}"));
            }
            Ok(Evaluation::Pure(residual_report(psi, focus, &kind, budget)?))
        }
        (ParsedState::Mixed(_), None) => usage("ckw evaluation needs a pure state"),
        (ParsedState::Mixed(rho), Some(kind)) => {
            if !(2..=5).contains(&n) {
                return usage(format!("mixed-state residuals need 2 to 5 qubits, got {n}"));
            }
            let order: Vec<usize> = std::iter::once(focus).chain((0..n).filter(|&q| q != focus)).collect();
            let local = partial_trace(rho, &order)?;
            let r = residual_for_subsystem(&local, &kind, budget)?;
            let status = if r.value >= -SLACK_TOL {
                Verdict::Certified
            } else if r.status == TermStatus::UpperBound {
                Verdict::Inconclusive
            } else {
                Verdict::Violated
            };
            Ok(Evaluation::Mixed(SubsystemReport {
                inequality,
                n_qubits: n,
                focus,
                residual: r.value,
                residual_status: r.status,
                status,
            }))
        }
    }
}
