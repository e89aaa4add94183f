//! Monogamy inequalities and their recursive residuals.
//!
//! The focus qubit is qubit 0 internally; report functions accept any focus
//! and relabel the breakdown in the caller's numbering.

mod chains;
mod report;
mod residual;

pub use chains::{binomial, binomial_identity_check, chains, subsets, t1_t2, IndexChain};
pub use report::{
    ckw_report, mrsm_residual_pure, residual_report, sm_original_rhs, wsm_residual_pure, Inequality,
    InequalityReport, Term, Verdict, SLACK_TOL,
};
pub use residual::{
    factorizes, residual_for_subsystem, Residual, ResidualBudget, ResidualCache, ResidualKind, TermStatus,
    FACTORIZATION_TOL, GHZ_SYMMETRY_TOL,
};
