//! Random instance generators: geometric instances that resemble full
//! Steiner tree inputs, and small arbitrary hypergraphs for oracle checks.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorParams {
    /// Number of local clusters to sample, as a multiple of `n`.
    pub clusters_per_vertex: f64,
    /// Range of the hyperedge discount applied to a cluster's MST length.
    pub ratio: (f64, f64),
    /// Inclusive range of cluster sizes.
    pub cluster_size: (usize, usize),
}

impl Default for GeneratorParams {
    fn default() -> Self {
        Self {
            clusters_per_vertex: 1.0,
            ratio: (0.85, 0.97),
            cluster_size: (3, 4),
        }
    }
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

/// Prim's algorithm on the complete Euclidean graph over `pts[idx]`.
/// Returns MST edges as index pairs into `idx` and the total length.
fn euclidean_mst(pts: &[(f64, f64)], idx: &[usize]) -> (Vec<(usize, usize)>, f64) {
    let k = idx.len();
    let mut in_tree = vec![false; k];
    let mut best = vec![f64::INFINITY; k];
    let mut from = vec![0usize; k];
    let mut edges = Vec::with_capacity(k.saturating_sub(1));
    let mut total = 0.0;
    if k == 0 {
        return (edges, total);
    }
    best[0] = 0.0;
    for _ in 0..k {
        let u = (0..k)
            .filter(|&i| !in_tree[i])
            .min_by(|&a, &b| best[a].total_cmp(&best[b]).then(a.cmp(&b)))
            .unwrap();
        in_tree[u] = true;
        if u != 0 {
            edges.push((from[u], u));
            total += best[u];
        }
        for v in 0..k {
            if !in_tree[v] {
                let d = dist(pts[idx[u]], pts[idx[v]]);
                if d < best[v] {
                    best[v] = d;
                    from[v] = u;
                }
            }
        }
    }
    (edges, total)
}

/// Geometric instance on `n` uniform points in the unit square: every
/// Euclidean MST pair, plus about `n` hyperedges over clusters of a random
/// point and its nearest neighbours, each weighted at a random discount of
/// the cluster's own MST length. Deterministic per seed.
pub fn generate_instance(seed: u64, n: usize, params: &GeneratorParams) -> Result<Hypergraph> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    let (lo, hi) = params.ratio;
    if !(0.0 < lo && lo <= hi) || params.cluster_size.0 < 3 || params.cluster_size.0 > params.cluster_size.1 {
        return Err(Error::InvalidArgument("bad generator parameters".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
    let all: Vec<usize> = (0..n).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    for (a, b) in euclidean_mst(&pts, &all).0 {
        let e = vec![a.min(b), a.max(b)];
        weights.push(dist(pts[a], pts[b]));
        seen.insert(e.clone());
        edges.push(e);
    }
    let clusters = (params.clusters_per_vertex * n as f64).round() as usize;
    for _ in 0..clusters {
        let k = rng.gen_range(params.cluster_size.0..=params.cluster_size.1).min(n);
        if k < 3 {
            break;
        }
        let c = rng.gen_range(0..n);
        let mut near: Vec<usize> = (0..n).collect();
        near.sort_by(|&a, &b| {
            dist(pts[c], pts[a])
                .total_cmp(&dist(pts[c], pts[b]))
                .then(a.cmp(&b))
        });
        let mut e: Vec<usize> = near[..k].to_vec();
        e.sort_unstable();
        let ratio = rng.gen_range(lo..=hi);
        if seen.insert(e.clone()) {
            weights.push(ratio * euclidean_mst(&pts, &e).1);
            edges.push(e);
        }
    }
    Hypergraph::new(n, edges, weights)
}

/// Small connected hypergraph with `m` random edges of 2 to 4 vertices,
/// plus pairs joining the components of a greedy hyperforest over them. Weights are integers in
/// `[1, 20]` when `integral`, otherwise multiples of 0.01 in `[1, 10]`.
pub fn random_instance(n: usize, m: usize, integral: bool, seed: u64) -> Result<Hypergraph> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weight = |rng: &mut ChaCha8Rng| {
        if integral {
            rng.gen_range(1..=20) as f64
        } else {
            rng.gen_range(100..=1000) as f64 / 100.0
        }
    };
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    let verts: Vec<usize> = (0..n).collect();
    for _ in 0..m.saturating_mul(4) {
        if edges.len() == m {
            break;
        }
        let k = rng.gen_range(2..=4usize).min(n);
        let mut e: Vec<usize> = verts.choose_multiple(&mut rng, k).copied().collect();
        e.sort_unstable();
        if seen.insert(e.clone()) {
            weights.push(weight(&mut rng));
            edges.push(e);
        }
    }
    // Grow a hyperforest greedily, then join its components with pairs, so
    // the result always contains a spanning tree. Connectivity alone would
    // not be enough: {0,1,2} and {1,2,3} connect four vertices but no subset
    // of them is a tree.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.shuffle(&mut rng);
    for i in order {
        let mut roots: Vec<usize> = edges[i].iter().map(|&v| find(&mut parent, v)).collect();
        roots.sort_unstable();
        if roots.windows(2).all(|w| w[0] != w[1]) {
            for &r in &roots[1..] {
                parent[r] = roots[0];
            }
        }
    }
    for v in 1..n {
        let (a, b) = (find(&mut parent, v - 1), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            let e = vec![v - 1, v];
            if seen.insert(e.clone()) {
                weights.push(weight(&mut rng));
                edges.push(e);
            }
        }
    }
    Hypergraph::new(n, edges, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_connected() {
        let p = GeneratorParams::default();
        let a = generate_instance(7, 60, &p).unwrap();
        assert_eq!(a, generate_instance(7, 60, &p).unwrap());
        assert!(a.is_connected());
        assert!(a.num_edges() >= 59 && a.num_edges() <= 180);
        assert!(a.edges().iter().any(|e| e.len() >= 3));
    }

    #[test]
    fn random_instances_connected() {
        for seed in 0..50 {
            let h = random_instance(7, 10, seed % 2 == 0, seed).unwrap();
            assert!(crate::oracle::brute_force_mst(&h).is_ok());
            assert!(h.num_edges() <= 16);
        }
    }

    #[test]
    fn tiny_n() {
        assert!(generate_instance(1, 1, &GeneratorParams::default()).is_err());
        let h = generate_instance(1, 2, &GeneratorParams::default()).unwrap();
        assert_eq!(h.num_edges(), 1);
    }
}
