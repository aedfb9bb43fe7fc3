//! Brute-force references used to check the solver and the separators on
//! small instances, plus generators of degree-feasible test points.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypergraph::{FractionalSolution, Hypergraph};

/// Largest edge count accepted by [`brute_force_mst`].
pub const BRUTE_FORCE_MAX_EDGES: usize = 25;

/// Union-find with an undo log, for backtracking searches.
#[derive(Clone)]
struct Dsu {
    parent: Vec<usize>,
    components: usize,
    log: Vec<(usize, usize)>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            components: n,
            log: Vec::new(),
        }
    }

    fn find(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    /// Merges the vertices of `e` if they lie in pairwise distinct
    /// components. Returns false (and changes nothing) otherwise.
    fn try_merge(&mut self, e: &[usize]) -> bool {
        let mut roots: Vec<usize> = e.iter().map(|&v| self.find(v)).collect();
        roots.sort_unstable();
        if roots.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        let head = roots[0];
        for &r in &roots[1..] {
            self.log.push((r, self.parent[r]));
            self.parent[r] = head;
            self.components -= 1;
        }
        true
    }

    fn mark(&self) -> usize {
        self.log.len()
    }

    fn undo(&mut self, mark: usize) {
        while self.log.len() > mark {
            let (r, p) = self.log.pop().unwrap();
            self.parent[r] = p;
            self.components += 1;
        }
    }
}

/// A spanning tree with its weight.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeCertificate {
    pub edges: Vec<usize>,
    pub weight: f64,
    pub components: usize,
}

/// True iff the edges connect every vertex and `sum (|e| - 1) = n - 1`.
pub fn is_spanning_tree(h: &Hypergraph, edges: &[usize]) -> bool {
    if edges.iter().any(|&e| e >= h.num_edges()) {
        return false;
    }
    let mut sorted = edges.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    if h.rank_of(sorted.iter().copied()) + 1 != h.n() {
        return false;
    }
    let mut dsu = Dsu::new(h.n());
    for &e in &sorted {
        let roots: Vec<usize> = h.edge(e).iter().map(|&v| dsu.find(v)).collect();
        let head = roots[0];
        for &r in &roots[1..] {
            if dsu.find(r) != dsu.find(head) {
                let (a, b) = (dsu.find(r), dsu.find(head));
                dsu.parent[a] = b;
                dsu.components -= 1;
            }
        }
    }
    dsu.components == 1
}

/// Minimum-weight spanning tree by exhaustive search with pruning. Among
/// trees of equal weight the lexicographically smallest edge list wins.
pub fn brute_force_mst(h: &Hypergraph) -> Result<TreeCertificate> {
    let m = h.num_edges();
    if m > BRUTE_FORCE_MAX_EDGES {
        return Err(Error::InvalidArgument(format!(
            "brute force limited to {BRUTE_FORCE_MAX_EDGES} edges, got {m}"
        )));
    }
    if h.n() <= 1 {
        return Ok(TreeCertificate {
            edges: Vec::new(),
            weight: 0.0,
            components: h.n(),
        });
    }
    struct Search<'a> {
        h: &'a Hypergraph,
        dsu: Dsu,
        chosen: Vec<usize>,
        weight: f64,
        best: Option<(Vec<usize>, f64)>,
    }
    impl Search<'_> {
        fn run(&mut self, e: usize) {
            if self.dsu.components == 1 {
                if self.best.as_ref().is_none_or(|(_, w)| self.weight < *w) {
                    self.best = Some((self.chosen.clone(), self.weight));
                }
                return;
            }
            if e == self.h.num_edges() {
                return;
            }
            if let Some((_, w)) = &self.best {
                if self.weight >= *w {
                    return;
                }
            }
            let mark = self.dsu.mark();
            if self.dsu.try_merge(self.h.edge(e)) {
                self.chosen.push(e);
                self.weight += self.h.weight(e);
                self.run(e + 1);
                self.weight -= self.h.weight(e);
                self.chosen.pop();
                self.dsu.undo(mark);
            }
            self.run(e + 1);
        }
    }
    let mut search = Search {
        h,
        dsu: Dsu::new(h.n()),
        chosen: Vec::new(),
        weight: 0.0,
        best: None,
    };
    search.run(0);
    let (edges, _) = search
        .best
        .ok_or_else(|| Error::Infeasible("hypergraph has no spanning tree".into()))?;
    let weight = edges.iter().map(|&e| h.weight(e)).sum();
    Ok(TreeCertificate {
        edges,
        weight,
        components: 1,
    })
}

/// A spanning tree found by randomized backtracking over a shuffled edge
/// order, or `None` when the hypergraph has none.
pub fn random_spanning_tree<R: Rng>(h: &Hypergraph, rng: &mut R) -> Option<Vec<usize>> {
    let mut order: Vec<usize> = (0..h.num_edges()).collect();
    order.shuffle(rng);
    fn go(h: &Hypergraph, order: &[usize], i: usize, dsu: &mut Dsu, chosen: &mut Vec<usize>) -> bool {
        if dsu.components == 1 {
            return true;
        }
        if i == order.len() {
            return false;
        }
        let mark = dsu.mark();
        if dsu.try_merge(h.edge(order[i])) {
            chosen.push(order[i]);
            if go(h, order, i + 1, dsu, chosen) {
                return true;
            }
            chosen.pop();
            dsu.undo(mark);
        }
        go(h, order, i + 1, dsu, chosen)
    }
    let mut dsu = Dsu::new(h.n());
    let mut chosen = Vec::new();
    if h.n() <= 1 || go(h, &order, 0, &mut dsu, &mut chosen) {
        chosen.sort_unstable();
        Some(chosen)
    } else {
        None
    }
}

fn random_weights<R: Rng>(k: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Random convex combination of two to four spanning-tree incidence
/// vectors. Satisfies the degree equation; never violates a subtour.
pub fn random_degree_feasible_x(h: &Hypergraph, seed: u64) -> Result<FractionalSolution> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(2..=4);
    let mut trees = Vec::with_capacity(k);
    for _ in 0..k {
        trees.push(
            random_spanning_tree(h, &mut rng)
                .ok_or_else(|| Error::Infeasible("hypergraph has no spanning tree".into()))?,
        );
    }
    combine(h, &trees, &random_weights(k, &mut rng))
}

/// Random convex combination of edge sets with `sum (|e| - 1) = n - 1`
/// that need not be trees. Satisfies the degree equation and, unlike
/// [`random_degree_feasible_x`], frequently violates subtours.
pub fn random_degree_feasible_point(h: &Hypergraph, seed: u64) -> Result<FractionalSolution> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = h.n().saturating_sub(1);
    let k = rng.gen_range(2..=4);
    let mut sets = Vec::with_capacity(k);
    'outer: for _ in 0..k {
        for _ in 0..64 {
            let mut order: Vec<usize> = (0..h.num_edges()).collect();
            order.shuffle(&mut rng);
            let mut rank = 0;
            let mut chosen = Vec::new();
            for e in order {
                let r = h.edge(e).len() - 1;
                if rank + r <= target {
                    rank += r;
                    chosen.push(e);
                }
                if rank == target {
                    sets.push(chosen);
                    continue 'outer;
                }
            }
        }
        // Fall back to a tree, which always has the right rank.
        sets.push(
            random_spanning_tree(h, &mut rng)
                .ok_or_else(|| Error::Infeasible("hypergraph has no spanning tree".into()))?,
        );
    }
    combine(h, &sets, &random_weights(k, &mut rng))
}

fn combine(h: &Hypergraph, sets: &[Vec<usize>], weights: &[f64]) -> Result<FractionalSolution> {
    let mut x = vec![0.0; h.num_edges()];
    for (set, &w) in sets.iter().zip(weights) {
        for &e in set {
            x[e] += w;
        }
    }
    for v in x.iter_mut() {
        *v = v.min(1.0);
    }
    FractionalSolution::new(h, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::degree_equation_residual;

    fn hg(n: usize, edges: &[&[usize]], w: &[f64]) -> Hypergraph {
        Hypergraph::new(n, edges.iter().map(|e| e.to_vec()).collect(), w.to_vec()).unwrap()
    }

    #[test]
    fn spanning_tree_checks() {
        let h = hg(3, &[&[0, 1, 2], &[0, 1], &[1, 2], &[0, 2]], &[1.0; 4]);
        assert!(is_spanning_tree(&h, &[0]));
        assert!(!is_spanning_tree(&h, &[1, 2, 3]));
        let h = hg(4, &[&[0, 1], &[2, 3]], &[1.0; 2]);
        assert!(!is_spanning_tree(&h, &[0, 1]));
    }

    #[test]
    fn brute_force_gadget() {
        let h = hg(3, &[&[0, 1], &[1, 2], &[0, 2], &[0, 1, 2]], &[1.0, 1.0, 1.0, 1.9]);
        let t = brute_force_mst(&h).unwrap();
        assert_eq!(t.edges, vec![3]);
        assert!((t.weight - 1.9).abs() < 1e-12);
    }

    #[test]
    fn brute_force_path() {
        let h = hg(4, &[&[0, 1], &[1, 2], &[2, 3]], &[1.0, 2.0, 3.0]);
        let t = brute_force_mst(&h).unwrap();
        assert_eq!(t.edges, vec![0, 1, 2]);
        assert_eq!(t.weight, 6.0);
    }

    #[test]
    fn brute_force_disconnected() {
        let h = hg(4, &[&[0, 1], &[2, 3]], &[1.0; 2]);
        assert!(matches!(brute_force_mst(&h), Err(Error::Infeasible(_))));
    }

    #[test]
    fn brute_force_lexicographic_tie() {
        let h = hg(3, &[&[0, 1], &[1, 2], &[0, 2]], &[1.0; 3]);
        assert_eq!(brute_force_mst(&h).unwrap().edges, vec![0, 1]);
    }

    #[test]
    fn random_points_satisfy_degree_equation() {
        let h = hg(4, &[&[0, 1], &[1, 2], &[0, 2], &[2, 3], &[1, 2, 3], &[0, 3]], &[1.0; 6]);
        for seed in 0..20 {
            let x = random_degree_feasible_x(&h, seed).unwrap();
            assert!(degree_equation_residual(&h, &x).abs() < 1e-12);
            let p = random_degree_feasible_point(&h, seed).unwrap();
            assert!(degree_equation_residual(&h, &p).abs() < 1e-12);
        }
        assert_eq!(
            random_degree_feasible_x(&h, 3).unwrap(),
            random_degree_feasible_x(&h, 3).unwrap()
        );
    }

    #[test]
    fn four_cycle_average_violates() {
        // Averaging the four 3-edge subsets of a 4-cycle with a chord gives a
        // point with a violated triangle.
        let h = hg(4, &[&[0, 1], &[1, 2], &[0, 2], &[2, 3], &[0, 3]], &[1.0; 5]);
        let sets = [vec![0, 1, 2], vec![0, 1, 2], vec![2, 3, 4]];
        let x = combine(&h, &sets, &[0.4, 0.4, 0.2]).unwrap();
        assert!(degree_equation_residual(&h, &x).abs() < 1e-12);
        let s = crate::hypergraph::VertexSubset::new(4, vec![0, 1, 2]).unwrap();
        assert!(crate::hypergraph::violation_deficit(&h, &x, &s) < 1.0);
    }
}
