use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Nested index sets `j^{n−1} ⊃ j^{n−2} ⊃ … ⊃ j³` over the non-focus qubits.
///
/// `levels[0]` belongs to `m = n−1` and has `n−2` elements; each following
/// level drops one index. Indices are zero-based and never contain qubit 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexChain {
    pub levels: Vec<Vec<usize>>,
}

impl IndexChain {
    /// Subsystem `{0} ∪ level` for each level, largest first.
    pub fn subsystems(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.levels.iter().map(|level| {
            let mut sys = Vec::with_capacity(level.len() + 1);
            sys.push(0);
            sys.extend_from_slice(level);
            sys
        })
    }
}

/// All `k`-element subsets of `items`, in lexicographic order of positions.
pub fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn walk(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            walk(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= items.len() {
        walk(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Every index chain for `n` qubits; `Π_{m=3}^{n−1} m` of them.
pub fn chains(n: usize) -> Result<Vec<IndexChain>> {
    if n < 3 {
        return invalid(format!("index chains need n >= 3, got {n}"));
    }
    let top: Vec<usize> = (1..n).collect();
    let mut out = Vec::new();
    extend_chains(&top, n - 2, &mut Vec::new(), &mut out);
    Ok(out)
}

/// Levels shrink from `size` down to 2 elements (m = size+1 down to 3).
fn extend_chains(parent: &[usize], size: usize, prefix: &mut Vec<Vec<usize>>, out: &mut Vec<IndexChain>) {
    if size < 2 {
        out.push(IndexChain { levels: prefix.clone() });
        return;
    }
    for level in subsets(parent, size) {
        prefix.push(level.clone());
        extend_chains(&level, size - 1, prefix, out);
        prefix.pop();
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `(n−1)·C(n−2, m−1) = (n−m)·C(n−1, m−1)`, checked in exact integers.
pub fn binomial_identity_check(n: u64, m: u64) -> Result<bool> {
    if m < 3 || m + 1 > n {
        return invalid(format!("identity needs 3 <= m <= n-1, got n={n}, m={m}"));
    }
    let lhs = (n - 1) as u128 * binomial(n - 2, m - 1);
    let rhs = (n - m) as u128 * binomial(n - 1, m - 1);
    Ok(lhs == rhs)
}

/// `T1` = largest of three reduced three-tangles, `T2` = sum of their 3/2 powers.
pub fn t1_t2(three_tangles: [f64; 3]) -> Result<(f64, f64)> {
    if let Some(v) = three_tangles.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return invalid(format!("three-tangle {v} outside [0, 1]"));
    }
    let t1 = three_tangles.iter().copied().fold(0.0, f64::max);
    let t2 = three_tangles.iter().map(|t| t.powf(1.5)).sum();
    Ok((t1, t2))
}
