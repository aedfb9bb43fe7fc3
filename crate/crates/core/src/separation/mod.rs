//! Separation of violated subtour inequalities `x(S) <= |S| - 1`.

mod flow;
mod reduce;

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::hypergraph::{
    connected_components, degree_equation_residual, support_hypergraph, vertex_degrees,
    violation_deficit, Hypergraph, VertexSubset, SUPPORT_EPS, VIOLATION_TOL,
};

pub use flow::{max_flow, Arc, FlowNetwork, MaxFlow};
pub use reduce::{decompose, reduce_single_vertex, Reduction};
pub(crate) use reduce::{decompose_sets, reduce_within, support_induced};

/// A subtour together with its violation `1 - f(S)` (positive when violated).
#[derive(Debug, Clone, PartialEq)]
pub struct ViolatedSubtour {
    pub subset: VertexSubset,
    pub violation: f64,
}

impl ViolatedSubtour {
    /// `f(S) = |S| - x(S)`.
    pub fn deficit(&self) -> f64 {
        1.0 - self.violation
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SeparationResult {
    /// Violated subtours, most violated first.
    pub subtours: Vec<ViolatedSubtour>,
    /// Largest `1 - f(S)` found, or 0 when nothing is violated.
    pub max_violation: f64,
    pub flow_calls: usize,
    /// Size of the largest reduced component handed to the flow separator.
    pub largest_component: usize,
}

impl SeparationResult {
    pub fn is_empty(&self) -> bool {
        self.subtours.is_empty()
    }

    fn finish(mut self) -> Self {
        self.subtours.sort_by(|a, b| {
            b.violation
                .total_cmp(&a.violation)
                .then_with(|| a.subset.members().cmp(b.subset.members()))
        });
        self.max_violation = self.subtours.first().map_or(0.0, |s| s.violation);
        self
    }
}

/// How the exact separator treats the reduced problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeparationMode {
    /// Split into connected and biconnected pieces and separate each on its
    /// own. Cheap, but favours subtours that fit inside one piece.
    #[default]
    Biased,
    /// Run the root-removal loop over the whole reduced support at once.
    Unbiased,
}

/// The min-cut formulation of `min { f(S) : root ∈ S }` on one hypergraph.
#[derive(Debug, Clone)]
pub struct ViolationNetwork {
    pub network: FlowNetwork,
    /// Constant subtracted from a cut value to obtain `f(S)`.
    pub offset: f64,
    n: usize,
}

impl ViolationNetwork {
    pub fn vertex_node(&self, v: usize) -> usize {
        2 + v
    }

    /// Vertices on the source side of a cut.
    pub fn subset_of(&self, source_side: &[bool]) -> Vec<usize> {
        (0..self.n).filter(|&v| source_side[2 + v]).collect()
    }

    /// Node set of the cut induced by a vertex set containing the root:
    /// the source, those vertices, and every edge node they touch.
    pub fn cut_of(&self, h: &Hypergraph, x: &[f64], members: &[usize]) -> Vec<bool> {
        let mut side = vec![false; self.network.num_nodes()];
        side[self.network.source()] = true;
        for &v in members {
            side[2 + v] = true;
        }
        let mut k = 0;
        for (e, verts) in h.edges().iter().enumerate() {
            if x[e] > SUPPORT_EPS {
                if verts.iter().any(|&v| side[2 + v]) {
                    side[2 + self.n + k] = true;
                }
                k += 1;
            }
        }
        side
    }
}

/// Builds the network whose minimum cut, less `offset`, equals
/// `min { f(S) : root ∈ S }`. Node layout: 0 source, 1 sink, `2 + v` for
/// vertex `v`, then one node per support edge.
pub fn build_violation_network(h: &Hypergraph, x: &[f64], root: usize) -> ViolationNetwork {
    let n = h.n();
    let support: Vec<usize> = (0..h.num_edges()).filter(|&e| x[e] > SUPPORT_EPS).collect();
    let mut b = vec![0.0; n];
    for &e in &support {
        for &v in h.edge(e) {
            b[v] += x[e];
        }
    }
    let mut net = FlowNetwork::new(n + support.len() + 2, 0, 1);
    let mut offset = 0.0;
    let mut finite_total = 0.0;
    for &bv in &b {
        if bv > 1.0 {
            offset += bv - 1.0;
        }
        finite_total += (bv - 1.0).abs();
    }
    finite_total += support.iter().map(|&e| x[e]).sum::<f64>();
    let inf = finite_total + 1.0;
    for (v, &bv) in b.iter().enumerate() {
        if bv > 1.0 {
            net.add_arc(0, 2 + v, bv - 1.0);
        } else if bv < 1.0 {
            net.add_arc(2 + v, 1, 1.0 - bv);
        }
    }
    for (k, &e) in support.iter().enumerate() {
        let node = 2 + n + k;
        net.add_arc(node, 1, x[e]);
        for &v in h.edge(e) {
            net.add_arc(2 + v, node, inf);
        }
    }
    net.add_arc(0, 2 + root, inf);
    ViolationNetwork {
        network: net,
        offset,
        n,
    }
}

struct Collector<'a> {
    h: &'a Hypergraph,
    x: &'a [f64],
    seen: HashSet<Vec<usize>>,
    result: SeparationResult,
}

impl<'a> Collector<'a> {
    fn new(h: &'a Hypergraph, x: &'a [f64]) -> Self {
        Self {
            h,
            x,
            seen: HashSet::new(),
            result: SeparationResult::default(),
        }
    }

    fn offer(&mut self, members: Vec<usize>) {
        let n = self.h.n();
        if members.len() < 2 || members.len() > n - 1 || self.seen.contains(&members) {
            return;
        }
        let subset = VertexSubset::from_sorted(n, members.clone());
        let f = violation_deficit(self.h, self.x, &subset);
        if f < 1.0 - VIOLATION_TOL {
            self.seen.insert(members);
            self.result.subtours.push(ViolatedSubtour {
                subset,
                violation: 1.0 - f,
            });
        }
    }

    /// Min-cut over `members` rooted at the vertex of least degree.
    /// Returns the root.
    fn flow_round(&mut self, members: &[usize]) -> usize {
        let sub = support_induced(self.h, self.x, members);
        let b = vertex_degrees(&sub.hypergraph, &sub.x);
        let root = (0..members.len())
            .min_by(|&a, &c| b[a].total_cmp(&b[c]).then(a.cmp(&c)))
            .expect("nonempty component");
        let vn = build_violation_network(&sub.hypergraph, &sub.x, root);
        let mf = max_flow(&vn.network);
        self.result.flow_calls += 1;
        self.result.largest_component = self.result.largest_component.max(members.len());
        let local = vn.subset_of(&mf.source_side);
        debug_assert!({
            let s = VertexSubset::from_sorted(sub.hypergraph.n(), local.clone());
            let f = violation_deficit(&sub.hypergraph, &sub.x, &s);
            (mf.value - vn.offset - f).abs() <= 1e-9 * (1.0 + mf.value.abs())
        });
        self.offer(local.into_iter().map(|v| sub.vertices[v]).collect());
        sub.vertices[root]
    }
}

fn remove_vertex(set: &[usize], v: usize) -> Vec<usize> {
    set.iter().copied().filter(|&u| u != v).collect()
}

/// Exact subtour separation by repeated min-cut computations.
///
/// In biased mode each irreducible piece is separated independently; after
/// each cut the root is deleted and the remainder decomposed again. In
/// unbiased mode the loop runs on the single-vertex-reduced support as a
/// whole, which also finds the maximum violation exactly.
pub fn separate_exact(h: &Hypergraph, x: &[f64], mode: SeparationMode) -> Result<SeparationResult> {
    let residual = degree_equation_residual(h, x);
    if residual.abs() > 1e-6 {
        return Err(Error::Contract(format!(
            "degree equation off by {residual:e}"
        )));
    }
    let all: Vec<usize> = (0..h.n()).collect();
    let mut col = Collector::new(h, x);
    match mode {
        SeparationMode::Biased => {
            let mut work = decompose_sets(h, x, &all);
            work.reverse();
            while let Some(piece) = work.pop() {
                let root = col.flow_round(&piece);
                let mut rest = decompose_sets(h, x, &remove_vertex(&piece, root));
                rest.reverse();
                work.extend(rest);
            }
        }
        SeparationMode::Unbiased => {
            let (mut current, _) = reduce_within(h, x, &all);
            while current.len() >= 2 {
                let root = col.flow_round(&current);
                current = reduce_within(h, x, &remove_vertex(&current, root)).0;
            }
        }
    }
    Ok(col.result.finish())
}

/// Subtours read off a disconnected support hypergraph: each component `S`
/// and its complement, when violated and of valid size.
pub fn separate_zero_weight(h: &Hypergraph, x: &[f64]) -> SeparationResult {
    let (support, _) = support_hypergraph(h, x, SUPPORT_EPS);
    let cc = connected_components(&support);
    let mut col = Collector::new(h, x);
    if cc.components.len() >= 2 {
        for comp in &cc.components {
            col.offer(comp.clone());
            let complement = VertexSubset::from_sorted(h.n(), comp.clone()).complement();
            col.offer(complement.members().to_vec());
        }
    }
    col.result.finish()
}

/// Largest number of vertices `brute_force_separate` accepts.
pub const BRUTE_FORCE_MAX_N: usize = 20;

/// Exhaustive search over every `S` with `2 <= |S| <= n - 1`. Reports the
/// most violated set (first in mask order on ties), if any is violated.
pub fn brute_force_separate(h: &Hypergraph, x: &[f64]) -> Result<SeparationResult> {
    let n = h.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::InvalidArgument(format!(
            "brute force separation limited to n <= {BRUTE_FORCE_MAX_N}"
        )));
    }
    let masks: Vec<u32> = h
        .edges()
        .iter()
        .map(|e| e.iter().fold(0u32, |m, &v| m | (1 << v)))
        .collect();
    let mut best: Option<(u32, f64)> = None;
    for s in 1u32..(1u32 << n) {
        let size = s.count_ones() as usize;
        if size < 2 || size > n - 1 {
            continue;
        }
        let within: f64 = masks
            .iter()
            .zip(x)
            .map(|(&m, &xe)| ((m & s).count_ones().saturating_sub(1)) as f64 * xe)
            .sum();
        let f = size as f64 - within;
        if f < 1.0 - VIOLATION_TOL && best.is_none_or(|(_, bf)| f < bf) {
            best = Some((s, f));
        }
    }
    let mut result = SeparationResult::default();
    if let Some((s, f)) = best {
        let members = (0..n).filter(|&v| s & (1 << v) != 0).collect();
        result.subtours.push(ViolatedSubtour {
            subset: VertexSubset::from_sorted(n, members),
            violation: 1.0 - f,
        });
    }
    Ok(result.finish())
}
