use std::io::Write;

use monogamy_core::linalg::haar_random_pure;
use monogamy_core::monogamy::{ckw_report, residual_report, Inequality, ResidualBudget, ResidualKind, Verdict};
use serde::Serialize;

use crate::output::{format_number, write_csv};
use crate::{usage, Result};

pub const CSV_HEADER: [&str; 7] = ["index", "seed", "lhs", "pair_sum", "higher_term", "slack", "status"];

#[derive(Debug, Clone)]
pub struct AuditConfig {
    pub inequality: Inequality,
    pub n_qubits: usize,
    pub samples: usize,
    pub seed: u64,
    pub budget: ResidualBudget,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditRecord {
    pub index: usize,
    pub seed: u64,
    pub lhs: f64,
    pub pair_sum: f64,
    pub higher_term: f64,
    pub slack: f64,
    pub status: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditSummary {
    pub inequality: Inequality,
    pub n_qubits: usize,
    pub samples: usize,
    pub certified: usize,
    pub inconclusive: usize,
    /// Nonzero only if a sample fails with every term exact or analytic.
    pub violations: usize,
    pub min_slack: f64,
    pub seed: u64,
    pub restarts: usize,
    pub iterations: usize,
    pub cardinality: Option<usize>,
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of sample `index` under master seed `seed`.
pub fn sample_seed(seed: u64, index: usize) -> u64 {
    mix(mix(seed) ^ index as u64)
}

pub fn check_size(inequality: Inequality, n: usize) -> Result<()> {
    let range = match inequality {
        Inequality::Ckw => 3..=6,
        _ => 3..=5,
    };
    if !range.contains(&n) {
        return usage(format!(
            "{inequality} audits support n in {}..={}, got {n}",
            range.start(),
            range.end()
        ));
    }
    Ok(())
}

pub fn residual_kind(inequality: Inequality, n: usize) -> Option<ResidualKind> {
    match inequality {
        Inequality::Ckw => None,
        Inequality::Wsm => Some(ResidualKind::Wsm),
        Inequality::Mrsm => Some(ResidualKind::Mrsm),
        Inequality::Sm => Some(ResidualKind::sm_default(n)),
    }
}

pub fn run_audit(cfg: &AuditConfig) -> Result<(AuditSummary, Vec<AuditRecord>)> {
    check_size(cfg.inequality, cfg.n_qubits)?;
    if cfg.samples == 0 {
        return usage("an audit needs at least one sample");
    }
    let kind = residual_kind(cfg.inequality, cfg.n_qubits);
    let mut records = Vec::with_capacity(cfg.samples);
    for index in 0..cfg.samples {
        let seed = sample_seed(cfg.seed, index);
        let psi = haar_random_pure(cfg.n_qubits, seed)?;
        let report = match &kind {
            None => ckw_report(&psi, 0)?,
            Some(kind) => residual_report(&psi, 0, kind, &cfg.budget.clone().with_seed(seed))?,
        };
        records.push(AuditRecord {
            index,
            seed,
            lhs: report.lhs,
            pair_sum: report.pair_sum,
            higher_term: report.higher_term,
            slack: report.slack,
            status: report.status,
        });
    }
    let count = |v: Verdict| records.iter().filter(|r| r.status == v).count();
    let summary = AuditSummary {
        inequality: cfg.inequality,
        n_qubits: cfg.n_qubits,
        samples: cfg.samples,
        certified: count(Verdict::Certified),
        inconclusive: count(Verdict::Inconclusive),
        violations: count(Verdict::Violated),
        min_slack: records.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min),
        seed: cfg.seed,
        restarts: cfg.budget.top.restarts,
        iterations: cfg.budget.top.iterations,
        cardinality: cfg.budget.top.cardinality,
    };
    Ok((summary, records))
}

pub fn write_audit_csv<W: Write>(out: W, records: &[AuditRecord]) -> Result<()> {
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            vec![
                r.index.to_string(),
                r.seed.to_string(),
                format_number(r.lhs),
                format_number(r.pair_sum),
                format_number(r.higher_term),
                format_number(r.slack),
                r.status.to_string(),
            ]
        })
        .collect();
    write_csv(out, &CSV_HEADER, &rows)
}
