use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use monogamy_cli::audit::{run_audit, write_audit_csv, AuditConfig};
use monogamy_cli::evaluate::{evaluate_state, EXIT_ERROR};
use monogamy_cli::figures::{default_a_range, fig1, fig2, fig3, Figure};
use monogamy_cli::output::open_output;
use monogamy_cli::state_file::parse_state_file;
use monogamy_cli::Result;
use monogamy_core::monogamy::{Inequality, ResidualBudget};

#[derive(Parser)]
#[command(name = "monogamy", version, about = "Monogamy inequality audits and figure data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Ineq {
    Ckw,
    Wsm,
    Mrsm,
    Sm,
}

impl From<Ineq> for Inequality {
    fn from(i: Ineq) -> Self {
        match i {
            Ineq::Ckw => Inequality::Ckw,
            Ineq::Wsm => Inequality::Wsm,
            Ineq::Mrsm => Inequality::Mrsm,
            Ineq::Sm => Inequality::Sm,
        }
    }
}

#[derive(clap::Args, Clone)]
struct BudgetArgs {
    /// Restarts of the top-level convex-roof search.
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    /// Decomposition size; default max(4, 2·rank).
    #[arg(long)]
    cardinality: Option<usize>,
}

impl BudgetArgs {
    fn budget(&self, seed: u64) -> ResidualBudget {
        let mut b = ResidualBudget::default().with_seed(seed);
        b.top.restarts = self.restarts;
        b.top.cardinality = self.cardinality;
        b
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check an inequality on Haar-random pure states; CSV rows, JSON summary on stderr.
    Audit {
        #[arg(long, value_enum)]
        ineq: Ineq,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit CSV data for fig1, fig2 or fig3.
    Figure {
        #[arg(long)]
        which: Figure,
        /// Normal-form class for fig1 (2..=5).
        #[arg(long, default_value_t = 5)]
        class: usize,
        #[arg(long)]
        a_min: Option<f64>,
        #[arg(long)]
        a_max: Option<f64>,
        #[arg(long, default_value_t = 300)]
        steps: usize,
        #[arg(long, default_value_t = 20)]
        p_steps: usize,
        /// Add convex-roof columns next to the closed forms (fig2, fig3).
        #[arg(long)]
        verify_numeric: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report one inequality for a state file; exit 0 certified, 2 inconclusive, 1 otherwise.
    Evaluate {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_enum)]
        ineq: Ineq,
        /// Focus qubit, 1-based.
        #[arg(long, default_value_t = 1)]
        focus: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Audit {
            ineq,
            n,
            samples,
            seed,
            budget,
            out,
        } => {
            let cfg = AuditConfig {
                inequality: ineq.into(),
                n_qubits: n,
                samples,
                seed,
                budget: budget.budget(seed),
            };
            let (summary, records) = run_audit(&cfg)?;
            write_audit_csv(open_output(out.as_deref())?, &records)?;
            eprintln!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
            Ok(0)
        }
        Command::Figure {
            which,
            class,
            a_min,
            a_max,
            steps,
            p_steps,
            verify_numeric,
            seed,
            budget,
            out,
        } => {
            let budget = budget.budget(seed);
            let numeric = verify_numeric.then_some(&budget);
            let table = match which {
                Figure::Fig1 => {
                    let (lo, hi) = default_a_range(class);
                    fig1(class, a_min.unwrap_or(lo), a_max.unwrap_or(hi), steps)?
                }
                Figure::Fig2 => fig2(p_steps, numeric)?,
                Figure::Fig3 => fig3(p_steps, numeric)?,
            };
            table.write(open_output(out.as_deref())?)?;
            Ok(0)
        }
        Command::Evaluate {
            state,
            ineq,
            focus,
            seed,
            budget,
            out,
        } => {
            if focus == 0 {
                return monogamy_cli::usage("focus qubits are numbered from 1");
            }
            let parsed = parse_state_file(&state)?;
            let eval = evaluate_state(&parsed, ineq.into(), focus - 1, &budget.budget(seed))?;
            let mut w = open_output(out.as_deref())?;
            w.write_all(eval.to_json().as_bytes())?;
            w.flush()?;
            eprint!("{}", eval.to_text());
            Ok(eval.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Exit code 2 is reserved for inconclusive reports.
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
