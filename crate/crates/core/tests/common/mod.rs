//! Trial generators shared by the property and acceptance targets.
#![allow(dead_code)]

use hgmst::harness::random_instance;
use hgmst::hypergraph::{violation_deficit, Hypergraph, VertexSubset, VIOLATION_TOL};
use hgmst::oracle::{random_degree_feasible_point, random_degree_feasible_x};
use hgmst::separation::brute_force_separate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random `S` with `2 <= |S| <= n - 1`.
pub fn random_subset<R: Rng>(n: usize, rng: &mut R) -> VertexSubset {
    loop {
        let members: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if members.len() >= 2 && members.len() < n {
            return VertexSubset::new(n, members).unwrap();
        }
    }
}

/// Random nonnegative `x` with no relation to any constraint.
pub fn random_x<R: Rng>(h: &Hypergraph, rng: &mut R) -> Vec<f64> {
    (0..h.num_edges())
        .map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.0..1.0) })
        .collect()
}

/// Instance with `n` in `[lo, hi]` and a degree-feasible point on it.
/// Odd seeds use combinations of trees, which violate nothing.
pub fn degree_feasible_trial(seed: u64, lo: usize, hi: usize) -> (Hypergraph, Vec<f64>) {
    let mut r = rng(seed);
    let n = r.gen_range(lo..=hi);
    let m = r.gen_range(n..=2 * n + 2);
    let h = random_instance(n, m, false, seed).unwrap();
    let x = if seed % 2 == 1 {
        random_degree_feasible_x(&h, seed).unwrap()
    } else {
        random_degree_feasible_point(&h, seed).unwrap()
    };
    (h, x.into_inner())
}

pub fn is_violated(h: &Hypergraph, x: &[f64], s: &VertexSubset) -> bool {
    s.len() >= 2 && s.len() < h.n() && violation_deficit(h, x, s) < 1.0 - VIOLATION_TOL
}

/// A degree-feasible `x` together with a violated subtour `S`: a random
/// violated subset when one turns up quickly, otherwise the most violated
/// one. `None` when `x` violates nothing.
pub fn violated_trial(seed: u64) -> Option<(Hypergraph, Vec<f64>, VertexSubset)> {
    let (h, x) = degree_feasible_trial(2 * seed, 5, 9);
    let mut r = rng(seed ^ 0x5eed);
    for _ in 0..64 {
        let s = random_subset(h.n(), &mut r);
        if is_violated(&h, &x, &s) {
            return Some((h, x, s));
        }
    }
    let best = brute_force_separate(&h, &x).unwrap();
    let s = best.subtours.first()?.subset.clone();
    Some((h, x, s))
}
