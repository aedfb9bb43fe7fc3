//! Greedy primal heuristic guided by the LP solution.

use crate::hypergraph::Hypergraph;
use crate::oracle::is_spanning_tree;

struct Components {
    parent: Vec<usize>,
    count: usize,
}

impl Components {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            count: n,
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }
}

/// Kruskal over `order`, taking an edge only when its vertices lie in
/// pairwise distinct components. Such an edge merges `|e|` components and
/// adds `|e| - 1` to the rank, so the rank never passes `n - 1`.
fn greedy(h: &Hypergraph, order: &[usize]) -> Option<Vec<usize>> {
    let mut comps = Components::new(h.n());
    let mut chosen = Vec::new();
    for &e in order {
        if comps.count == 1 {
            break;
        }
        let mut roots: Vec<usize> = h.edge(e).iter().map(|&v| comps.find(v)).collect();
        roots.sort_unstable();
        if roots.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        for &r in &roots[1..] {
            comps.parent[r] = roots[0];
        }
        comps.count -= roots.len() - 1;
        chosen.push(e);
    }
    if comps.count != 1 {
        return None;
    }
    chosen.sort_unstable();
    Some(chosen)
}

fn sorted_by(h: &Hypergraph, key: impl Fn(usize) -> f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..h.num_edges()).collect();
    order.sort_by(|&a, &b| key(a).total_cmp(&key(b)).then(a.cmp(&b)));
    order
}

/// A spanning tree built greedily in order of `c_e (1 - x_e)`, falling back
/// to plain weight order. `None` when neither order yields a tree.
pub fn primal_heuristic(h: &Hypergraph, x: &[f64]) -> Option<Vec<usize>> {
    if h.n() <= 1 {
        return Some(Vec::new());
    }
    let guided = sorted_by(h, |e| h.weight(e) * (1.0 - x[e].clamp(0.0, 1.0)));
    greedy(h, &guided)
        .or_else(|| greedy(h, &sorted_by(h, |e| h.weight(e))))
        .filter(|t| is_spanning_tree(h, t))
}
