use std::fmt;
use std::io::Write;
use std::str::FromStr;

use monogamy_core::convexroof::roof_upper_bound;
use monogamy_core::families::{analytic_curves, five_qubit_psi, rho_p, sweep_params, table1_bound, CurveFamily, Triple};
use monogamy_core::linalg::{partial_trace, partial_trace_pure};
use monogamy_core::measures::one_tangle;
use monogamy_core::monogamy::{residual_for_subsystem, t1_t2, ResidualBudget, ResidualKind};

use crate::output::{format_number, write_csv};
use crate::{usage, CliError, Result};

pub const FIG1_HEADER: [&str; 4] = ["a", "T1", "T2", "diff"];
pub const FIG2_HEADER: [&str; 3] = ["p", "tau_ABCD", "tau_ABC"];
pub const FIG2_NUMERIC: [&str; 2] = ["roof_tau_A_BCD", "roof_tau_ABC"];
pub const FIG3_HEADER: [&str; 4] = ["p", "tau_12345", "tau4max", "tau_123"];
pub const FIG3_NUMERIC: [&str; 1] = ["roof_tau_1235"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
}

impl FromStr for Figure {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Figure::Fig1),
            "fig2" => Ok(Figure::Fig2),
            "fig3" => Ok(Figure::Fig3),
            other => usage(format!("unknown figure {other:?}; expected fig1, fig2 or fig3")),
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
        };
        f.write_str(s)
    }
}

/// A header plus numeric rows, kept unformatted for tests.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn write<W: Write>(&self, out: W) -> Result<()> {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&x| format_number(x)).collect())
            .collect();
        write_csv(out, &self.header, &rows)
    }
}

fn grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite()) || lo > hi || steps == 0 {
        return usage(format!("bad sweep range [{lo}, {hi}] with {steps} steps"));
    }
    Ok((0..=steps).map(|i| lo + (hi - lo) * i as f64 / steps as f64).collect())
}

/// Default `a` range for a `fig1` class.
pub fn default_a_range(class: usize) -> (f64, f64) {
    if class == 2 {
        (1.0, 3.0)
    } else {
        (0.0, 3.0)
    }
}

pub fn fig1(class: usize, a_min: f64, a_max: f64, steps: usize) -> Result<Table> {
    if !(2..=5).contains(&class) {
        return usage(format!("fig1 supports classes 2..=5, got {class}"));
    }
    let mut rows = Vec::new();
    for a in grid(a_min, a_max, steps)? {
        let params = sweep_params(class, a).map_err(|e| CliError::Usage(e.to_string()))?;
        let mut bounds = [0.0; 3];
        for (slot, triple) in bounds.iter_mut().zip(Triple::ALL) {
            *slot = table1_bound(&params, triple)?;
        }
        let (t1, t2) = t1_t2(bounds)?;
        rows.push(vec![a, t1, t2, t1 - t2]);
    }
    Ok(Table {
        header: FIG1_HEADER.to_vec(),
        rows,
    })
}

/// `ρ_p` curves; with `numeric`, adds the roof one-tangle and the
/// three-qubit residual of `ρ_ABC`.
pub fn fig2(p_steps: usize, numeric: Option<&ResidualBudget>) -> Result<Table> {
    let mut header = FIG2_HEADER.to_vec();
    if numeric.is_some() {
        header.extend(FIG2_NUMERIC);
    }
    let mut rows = Vec::new();
    for p in grid(0.0, 1.0, p_steps)? {
        let curves = analytic_curves(CurveFamily::RhoP, p)?;
        let mut row = vec![p, curves.get("tau_ABCD").unwrap(), curves.get("tau_ABC").unwrap()];
        if let Some(budget) = numeric {
            let rho = rho_p(p)?;
            let focus = roof_upper_bound(&rho, |psi| one_tangle(psi, &[0]).unwrap_or(f64::NAN), &budget.top)?;
            let abc = partial_trace(&rho, &[0, 1, 2])?;
            let tau_abc = residual_for_subsystem(&abc, &ResidualKind::Mrsm, budget)?;
            row.extend([focus.value, tau_abc.value]);
        }
        rows.push(row);
    }
    Ok(Table { header, rows })
}

/// Four-qubit residual of the `1235` reduction of the five-qubit family.
pub fn roof_tau_1235(p: f64, budget: &ResidualBudget) -> Result<f64> {
    let rho = partial_trace_pure(&five_qubit_psi(p)?, &[0, 1, 2, 4])?;
    Ok(residual_for_subsystem(&rho, &ResidualKind::Mrsm, budget)?.value)
}

pub fn fig3(p_steps: usize, numeric: Option<&ResidualBudget>) -> Result<Table> {
    let mut header = FIG3_HEADER.to_vec();
    if numeric.is_some() {
        header.extend(FIG3_NUMERIC);
    }
    let mut rows = Vec::new();
    for p in grid(0.0, 1.0, p_steps)? {
        let c = analytic_curves(CurveFamily::FiveQubit, p)?;
        let mut row = vec![
            p,
            c.get("tau_12345").unwrap(),
            c.get("tau4max").unwrap(),
            c.get("tau_123").unwrap(),
        ];
        if let Some(budget) = numeric {
            row.push(roof_tau_1235(p, budget)?);
        }
        rows.push(row);
    }
    Ok(Table { header, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row_at(t: &Table, x: f64) -> Vec<f64> {
        t.rows.iter().find(|r| (r[0] - x).abs() < 1e-12).unwrap().clone()
    }

    #[test]
    fn fig1_class5_endpoints() {
        let t = fig1(5, 0.0, 3.0, 300).unwrap();
        assert_eq!(t.rows.len(), 301);
        let r0 = &t.rows[0];
        assert!((r0[1] - 4.0 / 9.0).abs() < 1e-12);
        assert!((r0[2] - 8.0 / 27.0).abs() < 1e-12);
        assert!((r0[3] - 4.0 / 27.0).abs() < 1e-12);
        assert!(row_at(&t, 1.0)[3] < 0.0);
    }

    #[test]
    fn fig1_rejects_bad_input() {
        assert!(fig1(6, 0.0, 1.0, 10).is_err());
        assert!(fig1(2, 0.0, 3.0, 10).is_err());
        assert!(fig1(3, 2.0, 1.0, 10).is_err());
        assert!(fig1(3, 0.0, 1.0, 0).is_err());
    }

    #[test]
    fn fig2_and_fig3_midpoints() {
        let t = fig2(20, None).unwrap();
        assert_eq!(t.header, FIG2_HEADER);
        assert_eq!(row_at(&t, 0.5), vec![0.5, 0.25, 0.25]);
        assert_eq!(t.rows[0], vec![0.0, 1.0, 0.0]);
        let t = fig3(20, None).unwrap();
        let r = row_at(&t, 0.5);
        assert!((r[1] - 0.25).abs() < 1e-15 && (r[2] - 0.5).abs() < 1e-15 && (r[3] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn figure_names() {
        assert_eq!("fig2".parse::<Figure>().unwrap(), Figure::Fig2);
        assert!("fig4".parse::<Figure>().is_err());
        assert_eq!(Figure::Fig3.to_string(), "fig3");
    }
}
