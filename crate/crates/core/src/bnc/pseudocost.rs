//! Pseudo costs: per-variable estimates of how fast the LP bound degrades
//! when a fractional variable is forced to 0 or to 1.

use std::collections::BTreeSet;

/// Per-edge record. `stamp` is the value of a solver-wide counter at the
/// time of the last recomputation; larger means newer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudoCost {
    pub c0: f64,
    pub c1: f64,
    pub stamp: u64,
    pub defined: bool,
}

impl Default for PseudoCost {
    fn default() -> Self {
        Self {
            c0: 0.0,
            c1: 0.0,
            stamp: 0,
            defined: false,
        }
    }
}

/// Pseudo costs of every edge, copied from parent to child nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoCostTable {
    costs: Vec<PseudoCost>,
}

impl PseudoCostTable {
    pub fn new(num_edges: usize) -> Self {
        Self {
            costs: vec![PseudoCost::default(); num_edges],
        }
    }

    pub fn get(&self, e: usize) -> &PseudoCost {
        &self.costs[e]
    }

    pub fn set(&mut self, e: usize, c0: f64, c1: f64, stamp: u64) {
        self.costs[e] = PseudoCost {
            c0,
            c1,
            stamp,
            defined: true,
        };
    }
}

/// `k = floor(sqrt(r) / 4)`: how many of the stalest defined costs get
/// refreshed at a node.
pub fn refresh_count(r: usize) -> usize {
    ((r as f64).sqrt() / 4.0).floor() as usize
}

/// Variables whose pseudo costs are recomputed at a node with fractional
/// set `fractional`: every undefined one, the `k` oldest defined ones, and
/// a stride-`floor(|R| / k)` sample of the defined ones starting at
/// `node_hash mod stride`. Returned in ascending edge order.
pub fn probe_set(table: &PseudoCostTable, fractional: &[usize], node_hash: u64) -> Vec<usize> {
    let mut chosen = BTreeSet::new();
    let mut defined = Vec::new();
    for &e in fractional {
        if table.get(e).defined {
            defined.push(e);
        } else {
            chosen.insert(e);
        }
    }
    // Newest first; equal stamps fall back to edge order.
    defined.sort_by(|&a, &b| {
        table
            .get(b)
            .stamp
            .cmp(&table.get(a).stamp)
            .then(a.cmp(&b))
    });
    let k = refresh_count(defined.len());
    if k > 0 {
        chosen.extend(defined[defined.len() - k..].iter().copied());
        let stride = defined.len() / k;
        let offset = (node_hash % stride as u64) as usize;
        chosen.extend(defined.iter().skip(offset).step_by(stride).copied());
    }
    chosen.into_iter().collect()
}

/// Downward pseudo cost `(z0 - z) / x_e`; infinite when the probe was
/// infeasible.
pub fn down_cost(z: f64, z0: f64, x_e: f64) -> f64 {
    if z0.is_infinite() {
        f64::INFINITY
    } else {
        (z0 - z).max(0.0) / x_e
    }
}

/// Upward pseudo cost `(z1 - z) / (1 - x_e)`; infinite when the probe was
/// infeasible.
pub fn up_cost(z: f64, z1: f64, x_e: f64) -> f64 {
    if z1.is_infinite() {
        f64::INFINITY
    } else {
        (z1 - z).max(0.0) / (1.0 - x_e)
    }
}

/// Branching score `min(c0 x_e, c1 (1 - x_e))`.
pub fn score(c: &PseudoCost, x_e: f64) -> f64 {
    (c.c0 * x_e).min(c.c1 * (1.0 - x_e))
}

/// The fractional variable with the largest score, ignoring variables with
/// an infinite cost on either side. Ties go to the lowest edge index.
/// Variables without defined costs score zero.
pub fn select_branch_variable(table: &PseudoCostTable, x: &[f64], fractional: &[usize]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    let mut sorted = fractional.to_vec();
    sorted.sort_unstable();
    for e in sorted {
        let c = table.get(e);
        if c.c0.is_infinite() || c.c1.is_infinite() {
            continue;
        }
        let s = if c.defined { score(c, x[e]) } else { 0.0 };
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((e, s));
        }
    }
    best.map(|(e, _)| e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulas() {
        assert_eq!(down_cost(10.0, 12.0, 0.5), 4.0);
        assert_eq!(up_cost(10.0, 11.0, 0.75), 4.0);
        assert_eq!(up_cost(10.0, f64::INFINITY, 0.5), f64::INFINITY);
        assert_eq!(refresh_count(16), 1);
        assert_eq!(refresh_count(15), 0);
        assert_eq!(refresh_count(64), 2);
    }

    #[test]
    fn selection_examples() {
        let mut t = PseudoCostTable::new(2);
        t.set(0, 4.0, 4.0, 1);
        t.set(1, 10.0, 1.0, 1);
        assert_eq!(select_branch_variable(&t, &[0.5, 0.9], &[0, 1]), Some(0));
        assert_eq!(select_branch_variable(&t, &[0.5, 0.9], &[1]), Some(1));
        let mut t = PseudoCostTable::new(3);
        for e in 0..3 {
            t.set(e, 2.0, 2.0, 1);
        }
        assert_eq!(select_branch_variable(&t, &[0.5; 3], &[2, 1, 0]), Some(0));
        t.set(0, f64::INFINITY, 2.0, 1);
        assert_eq!(select_branch_variable(&t, &[0.5; 3], &[0, 1, 2]), Some(1));
    }

    #[test]
    fn probe_set_trace() {
        // 16 defined with stamps 1..=16 plus two undefined.
        let mut t = PseudoCostTable::new(18);
        for e in 0..16 {
            t.set(e, 1.0, 1.0, e as u64 + 1);
        }
        let frac: Vec<usize> = (0..18).collect();
        // R newest to oldest is 15, 14, ..., 0; k = 1 so O = {0} and the
        // stride is 16, giving a single sample R[offset].
        let got = probe_set(&t, &frac, 3);
        assert_eq!(got, vec![0, 12, 16, 17]);
        let got = probe_set(&t, &frac, 16);
        assert_eq!(got, vec![0, 15, 16, 17]);
    }

    #[test]
    fn probe_set_small_r_skips_sampling() {
        let mut t = PseudoCostTable::new(5);
        t.set(0, 1.0, 1.0, 1);
        t.set(1, 1.0, 1.0, 2);
        assert_eq!(probe_set(&t, &[0, 1, 2, 3], 7), vec![2, 3]);
    }
}
