//! JSON state files.
//!
//! ```json
//! { "kind": "pure", "n_qubits": 2, "data": [[0.7071067811865476, 0.0], [0.0, 0.0], ...] }
//! { "kind": "mixed", "n_qubits": 1, "data": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]] }
//! ```
//!
//! `data` holds `[re, im]` pairs in row-major basis order: `2^n` of them for
//! a pure state, `2^n` rows of `2^n` for a mixed one. Norm and trace are
//! checked to `1e-8`; accepted values are stored without renormalizing, so
//! writing a parsed file reproduces every number exactly.

use std::fmt::Write as _;
use std::path::Path;

use monogamy_core::linalg::{ComplexMatrix, DensityMatrix, StateVector};
use monogamy_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::{CliError, Result};

pub const VALIDATION_TOL: f64 = 1e-8;
const MAX_QUBITS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStateFile {
    kind: StateKind,
    n_qubits: usize,
    data: RawData,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawData {
    Vector(Vec<[f64; 2]>),
    Matrix(Vec<Vec<[f64; 2]>>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParsedState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl ParsedState {
    pub fn n_qubits(&self) -> usize {
        match self {
            ParsedState::Pure(s) => s.n_qubits(),
            ParsedState::Mixed(r) => r.n_qubits(),
        }
    }
}

fn validation<T>(msg: impl Into<String>) -> Result<T> {
    Err(CliError::Validation(msg.into()))
}

fn complex(pair: &[f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

pub fn parse_state_str(text: &str) -> Result<ParsedState> {
    let raw: RawStateFile = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let n = raw.n_qubits;
    if n == 0 || n > MAX_QUBITS {
        return validation(format!("n_qubits must be in 1..={MAX_QUBITS}, got {n}"));
    }
    let dim = 1usize << n;
    match (raw.kind, raw.data) {
        (StateKind::Pure, RawData::Vector(v)) => {
            if v.len() != dim {
                return validation(format!("pure state on {n} qubits needs {dim} amplitudes, got {}", v.len()));
            }
            let amps = v.iter().map(complex).collect();
            StateVector::with_tolerance(amps, VALIDATION_TOL)
                .map(ParsedState::Pure)
                .map_err(|e| CliError::Validation(e.to_string()))
        }
        (StateKind::Mixed, RawData::Matrix(rows)) => {
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return validation(format!("mixed state on {n} qubits needs {dim} rows of {dim} entries"));
            }
            let data = rows.iter().flatten().map(complex).collect();
            let m = ComplexMatrix::from_vec(dim, dim, data).map_err(|e| CliError::Validation(e.to_string()))?;
            DensityMatrix::with_tolerance(m, VALIDATION_TOL)
                .map(ParsedState::Mixed)
                .map_err(|e| CliError::Validation(e.to_string()))
        }
        (StateKind::Pure, RawData::Matrix(_)) => validation("kind \"pure\" needs a flat list of [re, im] pairs"),
        (StateKind::Mixed, RawData::Vector(_)) => validation("kind \"mixed\" needs rows of [re, im] pairs"),
    }
}

pub fn parse_state_file(path: &Path) -> Result<ParsedState> {
    parse_state_str(&std::fs::read_to_string(path)?)
}

/// Shortest round-trip decimal; finite input only.
fn number(x: f64) -> String {
    format!("{x:?}")
}

fn pair(z: &Complex64) -> String {
    format!("[{}, {}]", number(z.re), number(z.im))
}

pub fn write_state_string(state: &ParsedState) -> String {
    let mut s = String::new();
    let (kind, n) = match state {
        ParsedState::Pure(p) => ("pure", p.n_qubits()),
        ParsedState::Mixed(r) => ("mixed", r.n_qubits()),
    };
    let _ = writeln!(s, "{{\n  \"kind\": \"{kind}\",\n  \"n_qubits\": {n},\n  \"data\": [");
    let lines: Vec<String> = match state {
        ParsedState::Pure(p) => p.amplitudes().iter().map(pair).collect(),
        ParsedState::Mixed(r) => {
            let m = r.matrix();
            (0..m.rows())
                .map(|i| {
                    let row: Vec<String> = (0..m.cols()).map(|j| pair(&m[(i, j)])).collect();
                    format!("[{}]", row.join(", "))
                })
                .collect()
        }
    };
    let _ = writeln!(s, "    {}", lines.join(",\n    "));
    s.push_str("  ]\n}\n");
    s
}

pub fn write_state_file(path: &Path, state: &ParsedState) -> Result<()> {
    std::fs::write(path, write_state_string(state))?;
    Ok(())
}
