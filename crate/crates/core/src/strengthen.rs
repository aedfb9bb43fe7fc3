//! Turning one violated subtour into a batch of stronger ones: shrink it by
//! the separation reductions, grow it one vertex at a time, and grow it by
//! whole complement components and their blocks.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use crate::error::{Error, Result};
use crate::hypergraph::{
    biconnected_components, connected_components, degree_equation_residual, intersection_counts,
    violation_deficit, Hypergraph, VertexSubset, SUPPORT_EPS, VIOLATION_TOL,
};
use crate::separation::{decompose_sets, support_induced};
use crate::subtour::{sparsest_form, SubtourConstraint};

/// A vertex is absorbed only while the violation stays above this margin.
pub const ABSORB_TOL: f64 = 1e-9;

/// Degree-equation residual tolerated by the component augmentations.
const DEGREE_TOL: f64 = 1e-6;

fn is_violated(h: &Hypergraph, x: &[f64], s: &VertexSubset) -> bool {
    s.len() >= 2 && s.len() < h.n() && violation_deficit(h, x, s) < 1.0 - VIOLATION_TOL
}

/// Violated irreducible pieces of the support hypergraph induced by `S`.
/// Returns `[S]` when the reductions leave `S` intact or produce nothing
/// violated.
pub fn strengthen_by_reduction(h: &Hypergraph, x: &[f64], s: &VertexSubset) -> Vec<VertexSubset> {
    let pieces: Vec<VertexSubset> = decompose_sets(h, x, s.members())
        .into_iter()
        .map(|p| VertexSubset::from_sorted(h.n(), p))
        .filter(|p| is_violated(h, x, p))
        .collect();
    if pieces.is_empty() {
        vec![s.clone()]
    } else {
        pieces
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Augmentation {
    pub subset: VertexSubset,
    /// `1 - f(S')`, strictly positive.
    pub violation: f64,
    /// Vertices absorbed.
    pub steps: usize,
    /// Absorbed vertices whose key was below 1, which lowered the violation.
    pub reducing_steps: usize,
    /// Smallest key absorbed together with the violation at that moment,
    /// used to tell whether tie order could have mattered.
    pub popped_keys: Vec<(f64, f64)>,
}

#[derive(PartialEq)]
struct Entry {
    key: f64,
    rank: usize,
    v: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key
            .total_cmp(&other.key)
            .then_with(|| other.rank.cmp(&self.rank))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Greedy single-vertex augmentation: repeatedly absorb the frontier vertex
/// `v` with the largest `z = x(S : {v})` while `y + z - 1` stays positive,
/// where `y = 1 - f(S)`. Equal keys are broken by lowest vertex id.
pub fn augment_single_vertex(h: &Hypergraph, x: &[f64], s: &VertexSubset) -> Result<Augmentation> {
    augment_single_vertex_ranked(h, x, s, None)
}

/// As [`augment_single_vertex`], with ties broken by `rank[v]` (lower wins)
/// instead of by vertex id.
pub fn augment_single_vertex_ranked(
    h: &Hypergraph,
    x: &[f64],
    s: &VertexSubset,
    rank: Option<&[usize]>,
) -> Result<Augmentation> {
    let n = h.n();
    let mut y = 1.0 - violation_deficit(h, x, s);
    if y <= 0.0 || s.len() < 2 {
        return Err(Error::Contract(format!(
            "single-vertex augmentation needs a violated subtour, got 1 - f(S) = {y}"
        )));
    }
    let rank_of = |v: usize| rank.map_or(v, |r| r[v]);
    let mut inside = s.mask();
    let mut size = s.len();
    let mut touched = vec![false; h.num_edges()];
    let mut key = vec![0.0; n];
    let mut heap = BinaryHeap::new();
    for (e, _) in intersection_counts(h, s.members()) {
        touched[e] = true;
        if x[e] <= SUPPORT_EPS {
            continue;
        }
        for &u in h.edge(e) {
            if !inside[u] {
                key[u] += x[e];
            }
        }
    }
    for u in 0..n {
        if !inside[u] && key[u] > 0.0 {
            heap.push(Entry {
                key: key[u],
                rank: rank_of(u),
                v: u,
            });
        }
    }
    let mut steps = 0;
    let mut reducing_steps = 0;
    let mut popped_keys = Vec::new();
    while let Some(Entry { key: z, v, .. }) = heap.pop() {
        if inside[v] || z != key[v] {
            continue;
        }
        if y + z - 1.0 <= ABSORB_TOL || size + 1 >= n {
            break;
        }
        popped_keys.push((z, y));
        y += z - 1.0;
        inside[v] = true;
        size += 1;
        steps += 1;
        if z < 1.0 {
            reducing_steps += 1;
        }
        for &e in h.incident(v) {
            if touched[e] {
                continue;
            }
            touched[e] = true;
            if x[e] <= SUPPORT_EPS {
                continue;
            }
            for &u in h.edge(e) {
                if !inside[u] {
                    key[u] += x[e];
                    heap.push(Entry {
                        key: key[u],
                        rank: rank_of(u),
                        v: u,
                    });
                }
            }
        }
    }
    let subset = VertexSubset::from_mask(&inside);
    let violation = 1.0 - violation_deficit(h, x, &subset);
    Ok(Augmentation {
        subset,
        violation,
        steps,
        reducing_steps,
        popped_keys,
    })
}

/// Which complement components the component augmentation examines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ComplementScope {
    /// Every component of the support induced by `V - S'`.
    Full,
    /// Only components inside the support components that meet `S'`, which
    /// avoids rediscovering the same sets from every subtour of a batch.
    #[default]
    Refined,
}

/// Result of the component augmentation: the violated complement
/// components `V_i` and, for each, the subtour set `V - V_i`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ComponentAugmentation {
    pub components: Vec<VertexSubset>,
    pub subsets: Vec<VertexSubset>,
}

fn require_degree_equation(h: &Hypergraph, x: &[f64]) -> Result<()> {
    let r = degree_equation_residual(h, x);
    if r.abs() > DEGREE_TOL {
        return Err(Error::Contract(format!("degree equation off by {r:e}")));
    }
    Ok(())
}

/// Splits the support induced by `V - S'` into connected components `V_i`
/// and keeps those whose anti-subtour `x(V_i) + x(V_i : S') >= |V_i|` is
/// violated. With the full scope at least one component qualifies whenever
/// `S'` is violated and `x` satisfies the degree equation.
pub fn augment_via_components(
    h: &Hypergraph,
    x: &[f64],
    s: &VertexSubset,
    scope: ComplementScope,
) -> Result<ComponentAugmentation> {
    require_degree_equation(h, x)?;
    if !is_violated(h, x, s) {
        return Err(Error::Contract("component augmentation needs a violated subtour".into()));
    }
    let n = h.n();
    let mut allowed = s.complement().mask();
    if scope == ComplementScope::Refined {
        let all: Vec<usize> = (0..n).collect();
        let support = support_induced(h, x, &all);
        let cc = connected_components(&support.hypergraph);
        let mut touches = vec![false; cc.components.len()];
        for v in s.iter() {
            touches[cc.component_of[v]] = true;
        }
        for v in 0..n {
            if !touches[cc.component_of[v]] {
                allowed[v] = false;
            }
        }
    }
    let rest: Vec<usize> = (0..n).filter(|&v| allowed[v]).collect();
    let sub = support_induced(h, x, &rest);
    let cc = connected_components(&sub.hypergraph);
    let mut out = ComponentAugmentation::default();
    for comp in cc.components {
        let vi = VertexSubset::from_sorted(n, comp.into_iter().map(|v| rest[v]).collect());
        let candidate = vi.complement();
        if is_violated(h, x, &candidate) {
            out.components.push(vi);
            out.subsets.push(candidate);
        }
    }
    Ok(out)
}

/// Splits a violated complement component `V_i` into blocks `U_j` and
/// returns `V - U_j` for every block whose anti-subtour is violated. A
/// biconnected `V_i` yields `V - V_i` itself.
pub fn augment_via_biconnected(h: &Hypergraph, x: &[f64], vi: &VertexSubset) -> Vec<VertexSubset> {
    let n = h.n();
    let sub = support_induced(h, x, vi.members());
    let bcc = biconnected_components(&sub.hypergraph);
    let mut out = Vec::new();
    if bcc.blocks.len() <= 1 {
        let candidate = vi.complement();
        if is_violated(h, x, &candidate) {
            out.push(candidate);
        }
        return out;
    }
    for block in bcc.blocks {
        let u = VertexSubset::from_sorted(n, block.into_iter().map(|v| sub.vertices[v]).collect());
        let candidate = u.complement();
        if is_violated(h, x, &candidate) {
            out.push(candidate);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Raw,
    Reduction,
    SingleVertexAug,
    CcAug,
    BccAug,
    Complementary,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StrengthenConfig {
    /// Also emit `V - S` for every emitted `S`.
    pub complementary: bool,
    /// Per raw subtour keep only the two strongest non-complementary
    /// outputs (experimental).
    pub strongest_two_only: bool,
    pub scope: ComplementScope,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct StrengthenBatch {
    pub constraints: Vec<SubtourConstraint>,
    pub provenance: Vec<Provenance>,
}

impl StrengthenBatch {
    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }
}

/// Share of `n` around which subtours are taken to be strongest when
/// `strongest_two_only` is set.
const STRONGEST_FRACTION: f64 = 0.342;

/// Full strengthening pipeline. For each raw subtour `S`: reduction pieces,
/// the single-vertex augmentation `S'`, component augmentations of `S'` and
/// block augmentations of each hit, optionally complements. Everything is
/// put in its sparsest form and deduplicated by canonical key.
pub fn strengthen_all(
    h: &Hypergraph,
    x: &[f64],
    raw: &[VertexSubset],
    config: &StrengthenConfig,
) -> StrengthenBatch {
    let n = h.n();
    let degree_ok = degree_equation_residual(h, x).abs() <= DEGREE_TOL;
    let mut seen = HashSet::new();
    let mut batch = StrengthenBatch::default();
    let mut push = |batch: &mut StrengthenBatch, s: &VertexSubset, p: Provenance| {
        if s.len() < 2 || s.len() >= n {
            return;
        }
        let Ok(c) = SubtourConstraint::subtour(h, s) else {
            return;
        };
        if seen.insert(c.key().clone()) {
            batch.constraints.push(sparsest_form(&c, h));
            batch.provenance.push(p);
        }
    };
    for s in raw {
        if !is_violated(h, x, s) {
            continue;
        }
        let mut emitted: Vec<(VertexSubset, Provenance)> = Vec::new();
        for r in strengthen_by_reduction(h, x, s) {
            let p = if &r == s {
                Provenance::Raw
            } else {
                Provenance::Reduction
            };
            emitted.push((r, p));
        }
        if !emitted.iter().any(|(r, _)| r == s) {
            emitted.push((s.clone(), Provenance::Raw));
        }
        if let Ok(aug) = augment_single_vertex(h, x, s) {
            if aug.steps > 0 {
                emitted.push((aug.subset.clone(), Provenance::SingleVertexAug));
            }
            if degree_ok {
                if let Ok(cc) = augment_via_components(h, x, &aug.subset, config.scope) {
                    for (vi, t) in cc.components.iter().zip(&cc.subsets) {
                        emitted.push((t.clone(), Provenance::CcAug));
                        for b in augment_via_biconnected(h, x, vi) {
                            emitted.push((b, Provenance::BccAug));
                        }
                    }
                }
            }
        }
        emitted.retain(|(t, _)| is_violated(h, x, t));
        if config.strongest_two_only && emitted.len() > 2 {
            let target = STRONGEST_FRACTION * n as f64;
            emitted.sort_by(|a, b| {
                let da = (a.0.len() as f64 - target).abs();
                let db = (b.0.len() as f64 - target).abs();
                da.total_cmp(&db).then_with(|| a.0.members().cmp(b.0.members()))
            });
            emitted.truncate(2);
        }
        for (t, p) in &emitted {
            push(&mut batch, t, *p);
        }
        if config.complementary {
            for (t, _) in &emitted {
                push(&mut batch, &t.complement(), Provenance::Complementary);
            }
        }
    }
    batch
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(n: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::new(n, edges.iter().map(|e| e.to_vec()).collect(), vec![1.0; edges.len()]).unwrap()
    }

    fn set(n: usize, v: &[usize]) -> VertexSubset {
        VertexSubset::new(n, v.to_vec()).unwrap()
    }

    #[test]
    fn reduction_drops_pendant() {
        let h = hg(4, &[&[0, 1], &[1, 2], &[0, 2], &[2, 3]]);
        let x = [0.9, 0.9, 0.9, 0.3];
        assert_eq!(strengthen_by_reduction(&h, &x, &set(4, &[0, 1, 2, 3])), vec![set(4, &[0, 1, 2])]);
        assert_eq!(strengthen_by_reduction(&h, &x, &set(4, &[0, 1, 2])), vec![set(4, &[0, 1, 2])]);
    }

    #[test]
    fn reduction_splits_blocks() {
        // Two triangles sharing vertex 2, each with f = 0.3.
        let h = hg(6, &[&[0, 1], &[1, 2], &[0, 2], &[2, 3], &[3, 4], &[2, 4], &[4, 5]]);
        let x = [0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.1];
        let out = strengthen_by_reduction(&h, &x, &set(6, &[0, 1, 2, 3, 4]));
        assert_eq!(out, vec![set(6, &[0, 1, 2]), set(6, &[2, 3, 4])]);
    }

    #[test]
    fn augment_absorbs_heavy_vertex() {
        let h = hg(4, &[&[0, 1], &[0, 1, 2], &[0, 2], &[1, 2], &[2, 3]]);
        let x = [1.0, 0.5, 0.6, 0.6, 0.0];
        let aug = augment_single_vertex(&h, &x, &set(4, &[0, 1])).unwrap();
        assert_eq!(aug.subset, set(4, &[0, 1, 2]));
        assert!((aug.violation - 1.2).abs() < 1e-12);
        let within = crate::hypergraph::weight_within(&h, &x, &aug.subset);
        assert!((within - 3.2).abs() < 1e-12);
    }

    #[test]
    fn augment_stops_at_boundary() {
        let h = hg(4, &[&[0, 1], &[1, 2], &[0, 2], &[2, 3]]);
        let x = [0.9, 0.9, 0.9, 0.3];
        let aug = augment_single_vertex(&h, &x, &set(4, &[0, 1, 2])).unwrap();
        assert_eq!(aug.subset, set(4, &[0, 1, 2]));
        assert_eq!(aug.steps, 0);
    }

    #[test]
    fn augment_without_frontier() {
        let h = hg(5, &[&[0, 1], &[0, 1], &[2, 3], &[3, 4]]);
        let x = [0.8, 0.8, 1.0, 1.0];
        let aug = augment_single_vertex(&h, &x, &set(5, &[0, 1])).unwrap();
        assert_eq!(aug.subset, set(5, &[0, 1]));
    }

    #[test]
    fn augment_rejects_unviolated() {
        let h = hg(3, &[&[0, 1], &[1, 2]]);
        assert!(augment_single_vertex(&h, &[1.0, 1.0], &set(3, &[0, 1])).is_err());
    }

    #[test]
    fn components_need_degree_equation() {
        let h = hg(4, &[&[0, 1], &[1, 2], &[0, 2], &[2, 3]]);
        let x = [0.9, 0.9, 0.9, 0.9];
        assert!(matches!(
            augment_via_components(&h, &x, &set(4, &[0, 1, 2]), ComplementScope::Full),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn single_complement_component_is_the_set_itself() {
        let h = hg(4, &[&[0, 1], &[1, 2], &[0, 2], &[2, 3]]);
        let x = [0.9, 0.9, 0.9, 0.3];
        let out = augment_via_components(&h, &x, &set(4, &[0, 1, 2]), ComplementScope::Full).unwrap();
        assert_eq!(out.subsets, vec![set(4, &[0, 1, 2])]);
    }

    #[test]
    fn batch_for_irreducible_set() {
        let h = hg(4, &[&[0, 1], &[1, 2], &[0, 2], &[2, 3]]);
        let x = [0.9, 0.9, 0.9, 0.3];
        let raw = vec![set(4, &[0, 1, 2])];
        let batch = strengthen_all(&h, &x, &raw, &StrengthenConfig::default());
        assert_eq!(batch.len(), 1);
        assert_eq!(batch.constraints[0].subset(), raw[0]);
        assert_eq!(batch.provenance, vec![Provenance::Raw]);
        let again = strengthen_all(&h, &x, &raw, &StrengthenConfig::default());
        assert_eq!(batch, again);
    }

    #[test]
    fn complementary_flag() {
        let h = hg(4, &[&[0, 1], &[1, 2], &[0, 2], &[2, 3]]);
        let x = [0.9, 0.9, 0.9, 0.3];
        let raw = [set(4, &[0, 1, 2, 3]).complement(), set(4, &[0, 1, 2])];
        let cfg = StrengthenConfig {
            complementary: true,
            ..Default::default()
        };
        let batch = strengthen_all(&h, &x, &raw[1..], &cfg);
        // {3} is too small to be a subtour set, so nothing complementary.
        assert!(!batch.provenance.contains(&Provenance::Complementary));
        let h = hg(5, &[&[0, 1], &[1, 2], &[0, 2], &[2, 3], &[3, 4]]);
        let x = [0.9, 0.9, 0.9, 0.3, 1.0];
        let batch = strengthen_all(&h, &x, &[set(5, &[0, 1, 2])], &cfg);
        let idx = batch
            .provenance
            .iter()
            .position(|p| *p == Provenance::Complementary)
            .unwrap();
        assert_eq!(batch.constraints[idx].subset(), set(5, &[3, 4]));
    }
}
