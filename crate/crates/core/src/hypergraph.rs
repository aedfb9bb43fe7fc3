//! Hypergraph instances and the weight and cut functions evaluated over a
//! fractional point `x`.
//!
//! For a vertex set `S` the weight within `S` is
//! `x(S) = sum_e max(|e ∩ S| - 1, 0) * x_e`, i.e. an edge with `k` vertices
//! inside `S` counts as `k - 1` ordinary edges. Everything in the separation
//! and strengthening code is phrased in terms of this function.

use std::ops::Deref;

use crate::error::{Error, Result};

/// Edges with `x_e` at or below this value are treated as absent from the
/// support hypergraph.
pub const SUPPORT_EPS: f64 = 1e-9;

/// A subtour is reported as violated when `f(S) < 1 - VIOLATION_TOL`.
pub const VIOLATION_TOL: f64 = 1e-7;

/// Slack allowed on the `[0, 1]` range of a fractional solution.
pub const BOUND_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
    weights: Vec<f64>,
    incidence: Vec<Vec<usize>>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges && self.weights == other.weights
    }
}

impl Hypergraph {
    /// Builds a validated hypergraph. Edge vertex lists are sorted; repeated
    /// vertices, edges with fewer than two vertices, out-of-range indices and
    /// negative or non-finite weights are rejected.
    pub fn new(n: usize, edges: Vec<Vec<usize>>, weights: Vec<f64>) -> Result<Self> {
        if edges.len() != weights.len() {
            return Err(Error::InvalidHypergraph(format!(
                "{} edges but {} weights",
                edges.len(),
                weights.len()
            )));
        }
        let mut sorted = Vec::with_capacity(edges.len());
        for (i, mut e) in edges.into_iter().enumerate() {
            e.sort_unstable();
            if e.len() < 2 {
                return Err(Error::InvalidHypergraph(format!(
                    "edge {i} has {} vertices, need at least 2",
                    e.len()
                )));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidHypergraph(format!("edge {i} repeats a vertex")));
            }
            if let Some(&v) = e.last().filter(|&&v| v >= n) {
                return Err(Error::InvalidHypergraph(format!(
                    "edge {i} references vertex {v} but n = {n}"
                )));
            }
            sorted.push(e);
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < 0.0)
        {
            return Err(Error::InvalidHypergraph(format!("edge {i} has weight {w}")));
        }
        Ok(Self::from_sorted(n, sorted, weights))
    }

    /// Internal constructor for derived hypergraphs whose edges are already
    /// sorted and valid.
    pub(crate) fn from_sorted(n: usize, edges: Vec<Vec<usize>>, weights: Vec<f64>) -> Self {
        let mut incidence = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            for &v in e {
                incidence[v].push(i);
            }
        }
        Self {
            n,
            edges,
            weights,
            incidence,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &[usize] {
        &self.edges[e]
    }

    pub fn weight(&self, e: usize) -> f64 {
        self.weights[e]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Edges containing `v`, in increasing index order.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    /// `sum_{e in edges} (|e| - 1)`, the rank a spanning tree must reach.
    pub fn rank_of<I: IntoIterator<Item = usize>>(&self, edges: I) -> usize {
        edges.into_iter().map(|e| self.edges[e].len() - 1).sum()
    }

    pub fn is_connected(&self) -> bool {
        connected_components(self).components.len() <= 1
    }

    /// True when every weight is an integer.
    pub fn has_integral_weights(&self) -> bool {
        self.weights.iter().all(|w| w.fract() == 0.0)
    }
}

/// Per-edge values of an LP point.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalSolution(Vec<f64>);

impl FractionalSolution {
    pub fn new(h: &Hypergraph, values: Vec<f64>) -> Result<Self> {
        if values.len() != h.num_edges() {
            return Err(Error::InvalidArgument(format!(
                "solution has {} values for {} edges",
                values.len(),
                h.num_edges()
            )));
        }
        if let Some((e, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v >= -BOUND_TOL && **v <= 1.0 + BOUND_TOL))
        {
            return Err(Error::InvalidArgument(format!("x[{e}] = {v} outside [0, 1]")));
        }
        Ok(Self(values))
    }

    pub fn zeros(h: &Hypergraph) -> Self {
        Self(vec![0.0; h.num_edges()])
    }

    /// Incidence vector of an edge set.
    pub fn from_edges(h: &Hypergraph, edges: &[usize]) -> Self {
        let mut x = vec![0.0; h.num_edges()];
        for &e in edges {
            x[e] = 1.0;
        }
        Self(x)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for FractionalSolution {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// A sorted set of vertices drawn from `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSubset {
    n: usize,
    members: Vec<usize>,
}

impl VertexSubset {
    pub fn new(n: usize, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if let Some(&v) = members.last().filter(|&&v| v >= n) {
            return Err(Error::InvalidArgument(format!("vertex {v} out of range for n = {n}")));
        }
        Ok(Self { n, members })
    }

    pub(crate) fn from_sorted(n: usize, members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.last().is_none_or(|&v| v < n));
        Self { n, members }
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        let members = mask
            .iter()
            .enumerate()
            .filter_map(|(v, &m)| m.then_some(v))
            .collect();
        Self {
            n: mask.len(),
            members,
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            n,
            members: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.n];
        for &v in &self.members {
            m[v] = true;
        }
        m
    }

    pub fn complement(&self) -> Self {
        let mask = self.mask();
        Self {
            n: self.n,
            members: (0..self.n).filter(|&v| !mask[v]).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }
}

/// Counts `|e ∩ S|` for every edge meeting `S`, touching only edges incident
/// to members of `S`.
pub(crate) fn intersection_counts(h: &Hypergraph, members: &[usize]) -> Vec<(usize, usize)> {
    let mut counts: Vec<(usize, usize)> = members
        .iter()
        .flat_map(|&v| h.incident(v).iter().copied())
        .map(|e| (e, 1))
        .collect();
    counts.sort_unstable_by_key(|&(e, _)| e);
    counts.dedup_by(|next, kept| {
        if next.0 == kept.0 {
            kept.1 += 1;
            true
        } else {
            false
        }
    });
    counts
}

/// `δ(S)`: edges with at least one vertex inside `S` and one outside.
pub fn delta(h: &Hypergraph, s: &VertexSubset) -> Vec<usize> {
    intersection_counts(h, s.members())
        .into_iter()
        .filter(|&(e, k)| k < h.edge(e).len())
        .map(|(e, _)| e)
        .collect()
}

/// `x(S)`.
pub fn weight_within(h: &Hypergraph, x: &[f64], s: &VertexSubset) -> f64 {
    weight_within_members(h, x, s.members())
}

pub(crate) fn weight_within_members(h: &Hypergraph, x: &[f64], members: &[usize]) -> f64 {
    intersection_counts(h, members)
        .into_iter()
        .filter(|&(_, k)| k >= 2)
        .map(|(e, k)| (k - 1) as f64 * x[e])
        .sum()
}

/// `x(S:T)` for disjoint `S` and `T`.
pub fn cut_weight(h: &Hypergraph, x: &[f64], s: &VertexSubset, t: &VertexSubset) -> Result<f64> {
    let in_s = s.mask();
    if t.iter().any(|v| in_s.get(v).copied().unwrap_or(false)) {
        return Err(Error::InvalidArgument("cut_weight needs disjoint vertex sets".into()));
    }
    let in_t = t.mask();
    Ok(h.edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.iter().any(|&v| in_s[v]) && e.iter().any(|&v| in_t[v]))
        .map(|(i, _)| x[i])
        .sum())
}

/// `f(S) = |S| - x(S)`; the subtour on `S` is violated when `f(S) < 1`.
pub fn violation_deficit(h: &Hypergraph, x: &[f64], s: &VertexSubset) -> f64 {
    s.len() as f64 - weight_within(h, x, s)
}

/// `b_v = x(δ(v))` for every vertex.
pub fn vertex_degrees(h: &Hypergraph, x: &[f64]) -> Vec<f64> {
    (0..h.n())
        .map(|v| h.incident(v).iter().map(|&e| x[e]).sum())
        .collect()
}

/// `x(V) - (|V| - 1)`, the residual of the total degree equation.
pub fn degree_equation_residual(h: &Hypergraph, x: &[f64]) -> f64 {
    let total: f64 = h
        .edges()
        .iter()
        .zip(x)
        .map(|(e, &xe)| (e.len() - 1) as f64 * xe)
        .sum();
    total - (h.n() as f64 - 1.0)
}

/// Keeps the edges with `x_e > eps`. Returns the sub-hypergraph and, for
/// each of its edges, the index of the original edge.
pub fn support_hypergraph(h: &Hypergraph, x: &[f64], eps: f64) -> (Hypergraph, Vec<usize>) {
    let keep: Vec<usize> = (0..h.num_edges()).filter(|&e| x[e] > eps).collect();
    let edges = keep.iter().map(|&e| h.edge(e).to_vec()).collect();
    let weights = keep.iter().map(|&e| h.weight(e)).collect();
    (Hypergraph::from_sorted(h.n(), edges, weights), keep)
}

/// Sub-hypergraph induced by `S`, with vertices relabelled `0..|S|`.
#[derive(Debug, Clone)]
pub struct InducedSubhypergraph {
    pub hypergraph: Hypergraph,
    pub x: Vec<f64>,
    /// Original id of each local vertex.
    pub vertices: Vec<usize>,
    /// Original index of each local edge.
    pub edges: Vec<usize>,
}

/// Replaces every edge by `e ∩ S`, keeping it only when at least two of its
/// vertices survive.
pub fn induced_subhypergraph(h: &Hypergraph, x: &[f64], s: &VertexSubset) -> InducedSubhypergraph {
    let mut local = vec![usize::MAX; h.n()];
    for (i, v) in s.iter().enumerate() {
        local[v] = i;
    }
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    let mut xs = Vec::new();
    let mut map = Vec::new();
    for (e, k) in intersection_counts(h, s.members()) {
        if k < 2 {
            continue;
        }
        let verts: Vec<usize> = h
            .edge(e)
            .iter()
            .filter(|&&v| local[v] != usize::MAX)
            .map(|&v| local[v])
            .collect();
        edges.push(verts);
        weights.push(h.weight(e));
        xs.push(x[e]);
        map.push(e);
    }
    InducedSubhypergraph {
        hypergraph: Hypergraph::from_sorted(s.len(), edges, weights),
        x: xs,
        vertices: s.members().to_vec(),
        edges: map,
    }
}

/// Connected or biconnected structure of a hypergraph.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ComponentDecomposition {
    pub component_of: Vec<usize>,
    /// Connected components, each sorted, ordered by smallest vertex.
    pub components: Vec<Vec<usize>>,
    /// Biconnected blocks (vertex sets); empty for a plain component split.
    pub blocks: Vec<Vec<usize>>,
    /// Edge indices belonging to each block.
    pub block_edges: Vec<Vec<usize>>,
    pub articulation: Vec<usize>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Components under "shares a hyperedge"; isolated vertices are singletons.
pub fn connected_components(h: &Hypergraph) -> ComponentDecomposition {
    let mut uf = UnionFind::new(h.n());
    for e in h.edges() {
        for w in e.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut id_of_root = vec![usize::MAX; h.n()];
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut component_of = vec![0; h.n()];
    for v in 0..h.n() {
        let r = uf.find(v);
        if id_of_root[r] == usize::MAX {
            id_of_root[r] = components.len();
            components.push(Vec::new());
        }
        component_of[v] = id_of_root[r];
        components[id_of_root[r]].push(v);
    }
    ComponentDecomposition {
        component_of,
        components,
        ..Default::default()
    }
}

/// Blocks and articulation vertices, computed on the bipartite incidence
/// graph (one node per vertex, one per edge). Incidence-graph blocks that
/// share an edge node are merged, so a hyperedge never spans two blocks and
/// only vertices can be articulation points. Isolated vertices form
/// singleton blocks.
pub fn biconnected_components(h: &Hypergraph) -> ComponentDecomposition {
    let n = h.n();
    let m = h.num_edges();
    let total = n + m;
    let neighbours = |node: usize| -> &[usize] {
        if node < n {
            h.incident(node)
        } else {
            h.edge(node - n)
        }
    };
    // Incidence-graph node ids: vertex v -> v, edge e -> n + e. The adjacency
    // slices above hold raw indices, so translate on the fly.
    let translate = |node: usize, raw: usize| if node < n { n + raw } else { raw };

    const UNSEEN: usize = usize::MAX;
    let mut disc = vec![UNSEEN; total];
    let mut low = vec![0; total];
    let mut time = 0;
    let mut arc_stack: Vec<(usize, usize)> = Vec::new();
    let mut arc_blocks: Vec<Vec<usize>> = Vec::new();
    let mut singleton_blocks: Vec<usize> = Vec::new();

    for root in 0..n {
        if disc[root] != UNSEEN {
            continue;
        }
        if h.incident(root).is_empty() {
            disc[root] = time;
            time += 1;
            singleton_blocks.push(root);
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (node, parent, next neighbour index)
        let mut frames: Vec<(usize, usize, usize)> = vec![(root, UNSEEN, 0)];
        while let Some(frame) = frames.last_mut() {
            let (node, parent, idx) = *frame;
            let adj = neighbours(node);
            if idx < adj.len() {
                frame.2 += 1;
                let w = translate(node, adj[idx]);
                if disc[w] == UNSEEN {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    arc_stack.push((node, w));
                    frames.push((w, node, 0));
                } else if w != parent && disc[w] < disc[node] {
                    low[node] = low[node].min(disc[w]);
                    arc_stack.push((node, w));
                }
            } else {
                frames.pop();
                if parent != UNSEEN {
                    low[parent] = low[parent].min(low[node]);
                    if low[node] >= disc[parent] {
                        let mut nodes = Vec::new();
                        while let Some((a, b)) = arc_stack.pop() {
                            nodes.push(a);
                            nodes.push(b);
                            if a == parent && b == node {
                                break;
                            }
                        }
                        nodes.sort_unstable();
                        nodes.dedup();
                        arc_blocks.push(nodes);
                    }
                }
            }
        }
    }

    // Merge incidence blocks that share an edge node.
    let mut uf = UnionFind::new(arc_blocks.len());
    let mut first_block_of_edge = vec![UNSEEN; m];
    for (b, nodes) in arc_blocks.iter().enumerate() {
        for &node in nodes.iter().filter(|&&node| node >= n) {
            let e = node - n;
            if first_block_of_edge[e] == UNSEEN {
                first_block_of_edge[e] = b;
            } else {
                uf.union(first_block_of_edge[e], b);
            }
        }
    }
    let mut merged: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let mut slot = vec![UNSEEN; arc_blocks.len()];
    for (b, nodes) in arc_blocks.iter().enumerate() {
        let r = uf.find(b);
        if slot[r] == UNSEEN {
            slot[r] = merged.len();
            merged.push((Vec::new(), Vec::new()));
        }
        let (verts, edges) = &mut merged[slot[r]];
        for &node in nodes {
            if node < n {
                verts.push(node);
            } else {
                edges.push(node - n);
            }
        }
    }
    for v in singleton_blocks {
        merged.push((vec![v], Vec::new()));
    }
    for (verts, edges) in merged.iter_mut() {
        verts.sort_unstable();
        verts.dedup();
        edges.sort_unstable();
        edges.dedup();
    }
    merged.sort();

    let mut block_count = vec![0usize; n];
    for (verts, _) in &merged {
        for &v in verts {
            block_count[v] += 1;
        }
    }
    let articulation = (0..n).filter(|&v| block_count[v] >= 2).collect();
    let cc = connected_components(h);
    let (blocks, block_edges) = merged.into_iter().unzip();
    ComponentDecomposition {
        component_of: cc.component_of,
        components: cc.components,
        blocks,
        block_edges,
        articulation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(n: usize, edges: &[&[usize]]) -> Hypergraph {
        let w = vec![1.0; edges.len()];
        Hypergraph::new(n, edges.iter().map(|e| e.to_vec()).collect(), w).unwrap()
    }

    fn set(n: usize, v: &[usize]) -> VertexSubset {
        VertexSubset::new(n, v.to_vec()).unwrap()
    }

    fn triangle_pendant() -> (Hypergraph, Vec<f64>) {
        (
            hg(4, &[&[0, 1], &[1, 2], &[0, 2], &[2, 3]]),
            vec![0.9, 0.9, 0.9, 0.3],
        )
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Hypergraph::new(3, vec![vec![0]], vec![1.0]).is_err());
        assert!(Hypergraph::new(3, vec![vec![0, 0]], vec![1.0]).is_err());
        assert!(Hypergraph::new(3, vec![vec![0, 3]], vec![1.0]).is_err());
        assert!(Hypergraph::new(3, vec![vec![0, 1]], vec![-1.0]).is_err());
        assert!(Hypergraph::new(3, vec![vec![0, 1]], vec![f64::NAN]).is_err());
        assert!(Hypergraph::new(3, vec![vec![0, 1]], vec![]).is_err());
        let h = Hypergraph::new(3, vec![vec![2, 0]], vec![1.0]).unwrap();
        assert_eq!(h.edge(0), &[0, 2]);
    }

    #[test]
    fn delta_examples() {
        let h = hg(3, &[&[0, 1, 2]]);
        assert_eq!(delta(&h, &set(3, &[0])), vec![0]);
        assert!(delta(&h, &set(3, &[0, 1, 2])).is_empty());
        let h = hg(4, &[&[0, 1], &[2, 3]]);
        assert!(delta(&h, &set(4, &[0, 1])).is_empty());
    }

    #[test]
    fn weight_within_examples() {
        let h = hg(3, &[&[0, 1, 2]]);
        let x = [1.0];
        assert_eq!(weight_within(&h, &x, &set(3, &[0, 1, 2])), 2.0);
        assert_eq!(weight_within(&h, &x, &set(3, &[0, 1])), 1.0);
        assert_eq!(weight_within(&h, &x, &set(3, &[2])), 0.0);
        assert_eq!(weight_within(&h, &x, &set(3, &[])), 0.0);
    }

    #[test]
    fn cut_weight_examples() {
        let h = hg(3, &[&[0, 1, 2]]);
        assert_eq!(cut_weight(&h, &[0.5], &set(3, &[0]), &set(3, &[1])).unwrap(), 0.5);
        let h = hg(4, &[&[0, 1], &[2, 3]]);
        assert_eq!(
            cut_weight(&h, &[1.0, 1.0], &set(4, &[0, 1]), &set(4, &[2, 3])).unwrap(),
            0.0
        );
        let (h, x) = triangle_pendant();
        let c = cut_weight(&h, &x, &set(4, &[0, 1, 2]), &set(4, &[3])).unwrap();
        assert!((c - 0.3).abs() < 1e-15);
        assert!(cut_weight(&h, &x, &set(4, &[0, 1]), &set(4, &[1, 2])).is_err());
    }

    #[test]
    fn violation_deficit_examples() {
        let h = hg(3, &[&[0, 1, 2]]);
        assert_eq!(violation_deficit(&h, &[1.0], &set(3, &[0, 1])), 1.0);
        let (h, x) = triangle_pendant();
        let f = violation_deficit(&h, &x, &set(4, &[0, 1, 2]));
        assert!((f - 0.3).abs() < 1e-12);
        let zero = vec![0.0; 4];
        assert_eq!(violation_deficit(&h, &zero, &set(4, &[1, 2, 3])), 3.0);
    }

    #[test]
    fn support_examples() {
        let h = hg(3, &[&[0, 1], &[1, 2], &[0, 2]]);
        let (s, map) = support_hypergraph(&h, &[0.0, 0.5, 1.0], SUPPORT_EPS);
        assert_eq!(map, vec![1, 2]);
        assert_eq!(s.num_edges(), 2);
        let (s, map) = support_hypergraph(&h, &[0.0, 0.0, 0.0], SUPPORT_EPS);
        assert!(map.is_empty());
        assert_eq!(s.n(), 3);
        let h2 = hg(3, &[&[0, 1], &[1, 2]]);
        let (_, map) = support_hypergraph(&h2, &[1e-12, 0.2], 1e-9);
        assert_eq!(map, vec![1]);
    }

    #[test]
    fn connected_component_examples() {
        let cc = connected_components(&hg(4, &[&[0, 1, 2]]));
        assert_eq!(cc.components, vec![vec![0, 1, 2], vec![3]]);
        let cc = connected_components(&hg(3, &[&[0, 1], &[1, 2]]));
        assert_eq!(cc.components.len(), 1);
        let cc = connected_components(&hg(5, &[&[0, 1], &[2, 3]]));
        assert_eq!(cc.components, vec![vec![0, 1], vec![2, 3], vec![4]]);
        assert_eq!(cc.component_of, vec![0, 0, 1, 1, 2]);
    }

    #[test]
    fn biconnected_examples() {
        let b = biconnected_components(&hg(3, &[&[0, 1], &[1, 2]]));
        assert_eq!(b.blocks, vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(b.articulation, vec![1]);

        let b = biconnected_components(&hg(3, &[&[0, 1, 2]]));
        assert_eq!(b.blocks, vec![vec![0, 1, 2]]);
        assert!(b.articulation.is_empty());

        let b = biconnected_components(&hg(5, &[&[0, 1, 2], &[2, 3], &[3, 4], &[2, 4]]));
        assert_eq!(b.blocks, vec![vec![0, 1, 2], vec![2, 3, 4]]);
        assert_eq!(b.block_edges, vec![vec![0], vec![1, 2, 3]]);
        assert_eq!(b.articulation, vec![2]);
    }

    #[test]
    fn hyperedge_stays_inside_one_block() {
        // The incidence graph of this hypergraph is a tree; the triple must
        // still come out as a single block.
        let b = biconnected_components(&hg(5, &[&[0, 1, 2], &[0, 3], &[1, 4]]));
        assert_eq!(b.blocks, vec![vec![0, 1, 2], vec![0, 3], vec![1, 4]]);
        assert_eq!(b.articulation, vec![0, 1]);
    }

    #[test]
    fn induced_examples() {
        let h = hg(3, &[&[0, 1, 2]]);
        let ind = induced_subhypergraph(&h, &[0.4], &set(3, &[0, 1]));
        assert_eq!(ind.hypergraph.edges(), &[vec![0, 1]]);
        assert_eq!(ind.x, vec![0.4]);
        let ind = induced_subhypergraph(&h, &[0.4], &set(3, &[0]));
        assert_eq!(ind.hypergraph.num_edges(), 0);
        let h = hg(4, &[&[0, 1], &[1, 2, 3]]);
        let ind = induced_subhypergraph(&h, &[0.5, 0.5], &set(4, &[1, 2, 3]));
        assert_eq!(ind.hypergraph.edges(), &[vec![0, 1, 2]]);
        assert_eq!(ind.edges, vec![1]);
        assert_eq!(ind.vertices, vec![1, 2, 3]);
    }

    #[test]
    fn fractional_solution_range() {
        let h = hg(3, &[&[0, 1], &[1, 2]]);
        assert!(FractionalSolution::new(&h, vec![0.5, 1.0]).is_ok());
        assert!(FractionalSolution::new(&h, vec![0.5, 1.1]).is_err());
        assert!(FractionalSolution::new(&h, vec![0.5]).is_err());
    }
}
