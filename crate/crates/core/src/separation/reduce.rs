//! Problem reductions applied before the flow separator: single-vertex
//! elimination and splitting into connected and biconnected pieces.

use crate::hypergraph::{
    biconnected_components, connected_components, intersection_counts, Hypergraph,
    InducedSubhypergraph, SUPPORT_EPS,
};

/// A vertex with `b_v <= 1 + REDUCE_TOL` is eliminated. Kept tiny so the
/// reduction never discards a set whose violation matters at the 1e-9 level.
pub(crate) const REDUCE_TOL: f64 = 1e-10;

/// Support edges with at least two vertices in `members`, restricted to
/// `members` and relabelled. `members` must be sorted.
pub(crate) fn support_induced(h: &Hypergraph, x: &[f64], members: &[usize]) -> InducedSubhypergraph {
    let mut local = vec![usize::MAX; h.n()];
    for (i, &v) in members.iter().enumerate() {
        local[v] = i;
    }
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    let mut xs = Vec::new();
    let mut map = Vec::new();
    for (e, k) in intersection_counts(h, members) {
        if k < 2 || x[e] <= SUPPORT_EPS {
            continue;
        }
        edges.push(
            h.edge(e)
                .iter()
                .filter(|&&v| local[v] != usize::MAX)
                .map(|&v| local[v])
                .collect(),
        );
        weights.push(h.weight(e));
        xs.push(x[e]);
        map.push(e);
    }
    InducedSubhypergraph {
        hypergraph: Hypergraph::from_sorted(members.len(), edges, weights),
        x: xs,
        vertices: members.to_vec(),
        edges: map,
    }
}

/// Fixed point of single-vertex elimination inside `members`. Returns the
/// surviving vertices (sorted) and the eliminated ones in removal order.
/// The fixed point does not depend on the removal order.
pub(crate) fn reduce_within(h: &Hypergraph, x: &[f64], members: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut alive = vec![false; h.n()];
    for &v in members {
        alive[v] = true;
    }
    let mut count = vec![0usize; h.num_edges()];
    for (e, k) in intersection_counts(h, members) {
        if x[e] > SUPPORT_EPS {
            count[e] = k;
        }
    }
    let mut b = vec![0.0; h.n()];
    for &v in members {
        b[v] = h
            .incident(v)
            .iter()
            .filter(|&&e| count[e] >= 2)
            .map(|&e| x[e])
            .sum();
    }
    let mut queue: Vec<usize> = members
        .iter()
        .rev()
        .copied()
        .filter(|&v| b[v] <= 1.0 + REDUCE_TOL)
        .collect();
    let mut removed = Vec::new();
    while let Some(v) = queue.pop() {
        if !alive[v] || b[v] > 1.0 + REDUCE_TOL {
            continue;
        }
        alive[v] = false;
        removed.push(v);
        for &e in h.incident(v) {
            if count[e] == 0 {
                continue;
            }
            count[e] -= 1;
            if count[e] == 1 {
                for &u in h.edge(e) {
                    if alive[u] {
                        b[u] -= x[e];
                        if b[u] <= 1.0 + REDUCE_TOL {
                            queue.push(u);
                        }
                    }
                }
            }
        }
    }
    let kept = members.iter().copied().filter(|&v| alive[v]).collect();
    (kept, removed)
}

/// Recursive fixed point of {single-vertex elimination, connected split,
/// biconnected split} starting from `members`. Pieces come back sorted by
/// their smallest vertex.
pub(crate) fn decompose_sets(h: &Hypergraph, x: &[f64], members: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut work = vec![members.to_vec()];
    while let Some(set) = work.pop() {
        let (kept, _) = reduce_within(h, x, &set);
        if kept.len() < 2 {
            continue;
        }
        let sub = support_induced(h, x, &kept);
        let cc = connected_components(&sub.hypergraph);
        if cc.components.len() > 1 {
            for comp in cc.components {
                work.push(comp.into_iter().map(|v| kept[v]).collect());
            }
            continue;
        }
        let bcc = biconnected_components(&sub.hypergraph);
        if bcc.blocks.len() > 1 {
            for block in bcc.blocks {
                work.push(block.into_iter().map(|v| kept[v]).collect());
            }
            continue;
        }
        out.push(kept);
    }
    out.sort();
    out
}

/// Result of single-vertex elimination on the whole support hypergraph.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub reduced: InducedSubhypergraph,
    pub removed: Vec<usize>,
}

/// Repeatedly deletes vertices with `b_v = x(δ(v)) <= 1`. A violated subtour
/// exists in the input exactly when one exists in the result.
pub fn reduce_single_vertex(h: &Hypergraph, x: &[f64]) -> Reduction {
    let all: Vec<usize> = (0..h.n()).collect();
    let (kept, removed) = reduce_within(h, x, &all);
    Reduction {
        reduced: support_induced(h, x, &kept),
        removed,
    }
}

/// Irreducible pieces of the support hypergraph. Any violated subtour of a
/// piece is violated in the original, and the original has a violated
/// subtour only if some piece does.
pub fn decompose(h: &Hypergraph, x: &[f64]) -> Vec<InducedSubhypergraph> {
    let all: Vec<usize> = (0..h.n()).collect();
    decompose_sets(h, x, &all)
        .into_iter()
        .map(|set| support_induced(h, x, &set))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(n: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::new(n, edges.iter().map(|e| e.to_vec()).collect(), vec![1.0; edges.len()]).unwrap()
    }

    #[test]
    fn star_reduces_to_nothing() {
        let h = hg(4, &[&[0, 1], &[0, 2], &[0, 3]]);
        let r = reduce_single_vertex(&h, &[1.0, 1.0, 1.0]);
        assert_eq!(r.reduced.vertices, Vec::<usize>::new());
        assert_eq!(r.removed.len(), 4);
    }

    #[test]
    fn triangle_pendant_keeps_triangle() {
        let h = hg(4, &[&[0, 1], &[1, 2], &[0, 2], &[2, 3]]);
        let r = reduce_single_vertex(&h, &[0.9, 0.9, 0.9, 0.3]);
        assert_eq!(r.reduced.vertices, vec![0, 1, 2]);
        assert_eq!(r.removed, vec![3]);
        assert_eq!(r.reduced.edges, vec![0, 1, 2]);
    }

    #[test]
    fn zero_point_reduces_to_nothing() {
        let h = hg(3, &[&[0, 1], &[1, 2]]);
        assert!(reduce_single_vertex(&h, &[0.0, 0.0]).reduced.vertices.is_empty());
    }

    #[test]
    fn two_disjoint_triangles() {
        let h = hg(6, &[&[0, 1], &[1, 2], &[0, 2], &[3, 4], &[4, 5], &[3, 5]]);
        let pieces = decompose(&h, &[0.9; 6]);
        let sets: Vec<_> = pieces.iter().map(|p| p.vertices.clone()).collect();
        assert_eq!(sets, vec![vec![0, 1, 2], vec![3, 4, 5]]);
    }

    #[test]
    fn triangles_sharing_a_vertex() {
        let h = hg(5, &[&[0, 1], &[1, 2], &[0, 2], &[2, 3], &[3, 4], &[2, 4]]);
        let pieces = decompose(&h, &[0.9; 6]);
        let sets: Vec<_> = pieces.iter().map(|p| p.vertices.clone()).collect();
        assert_eq!(sets, vec![vec![0, 1, 2], vec![2, 3, 4]]);
    }

    #[test]
    fn tree_decomposes_to_nothing() {
        let h = hg(5, &[&[0, 1, 2], &[2, 3], &[3, 4]]);
        assert!(decompose(&h, &[1.0, 1.0, 1.0]).is_empty());
    }
}
