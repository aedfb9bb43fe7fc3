//! LP relaxation of the spanning-tree integer program and the embedded
//! simplex engine that solves it.
//!
//! Row 0 is always the total degree equation `sum_e (|e| - 1) x_e = n - 1`.
//! Subtour rows are appended and removed as the cutting-plane loop runs;
//! branching is done through variable bounds with a mark/undo stack.

mod simplex;

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub use simplex::BasisToken;

/// Values closer than this to 0 or 1 count as integral.
pub const INTEGRALITY_TOL: f64 = 1e-6;

/// Row slack at or below this value means the row is binding.
pub const BINDING_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowOrigin {
    DegreeEquation,
    VertexDegree,
    Subtour,
    AntiSubtour,
}

/// A row about to be added to the LP.
#[derive(Debug, Clone, PartialEq)]
pub struct RowSpec {
    /// Sparse coefficients sorted by column.
    pub coefs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
    pub origin: RowOrigin,
    /// Key of the pool entry this row came from, if any.
    pub pool_key: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub spec: RowSpec,
    /// Consecutive optimal solves in which this row had positive slack.
    pub age: usize,
    uid: u64,
}

impl Row {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.spec.coefs.iter().map(|&(j, a)| a * x[j]).sum()
    }

    /// Nonnegative distance from the row's bound; zero when binding.
    pub fn slack(&self, x: &[f64]) -> f64 {
        let act = self.activity(x);
        match self.spec.relation {
            Relation::Le => self.spec.rhs - act,
            Relation::Ge => act - self.spec.rhs,
            Relation::Eq => -(act - self.spec.rhs).abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    IterationLimit,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    /// `+inf` when infeasible.
    pub objective: f64,
    pub basis: BasisToken,
    /// Edges with `1e-6 < x_e < 1 - 1e-6`.
    pub fractional: Vec<usize>,
    /// Slack of every row, in row order.
    pub slacks: Vec<f64>,
    pub iterations: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    cost: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    bound_stack: Vec<(usize, f64, f64)>,
    rows: Vec<Row>,
    next_uid: u64,
    iteration_cap: Option<usize>,
    engine: simplex::Engine,
}

impl LinearProgram {
    /// An LP over `cost.len()` variables in `[0, 1]` with no rows yet.
    pub fn new(cost: Vec<f64>) -> Self {
        let n = cost.len();
        Self {
            lo: vec![0.0; n],
            hi: vec![1.0; n],
            cost,
            bound_stack: Vec::new(),
            rows: Vec::new(),
            next_uid: 0,
            iteration_cap: None,
            engine: simplex::Engine::new(n),
        }
    }

    pub fn num_cols(&self) -> usize {
        self.cost.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &Row {
        &self.rows[i]
    }

    pub fn cost(&self) -> &[f64] {
        &self.cost
    }

    pub fn bounds(&self, j: usize) -> (f64, f64) {
        (self.lo[j], self.hi[j])
    }

    /// Per-solve pivot cap; `None` means `50 * (rows + cols)`.
    pub fn set_iteration_cap(&mut self, cap: Option<usize>) {
        self.iteration_cap = cap;
    }

    pub fn add_row(&mut self, mut spec: RowSpec) -> Result<usize> {
        spec.coefs.sort_unstable_by_key(|&(j, _)| j);
        if let Some(&(j, _)) = spec.coefs.iter().find(|&&(j, _)| j >= self.num_cols()) {
            return Err(Error::InvalidArgument(format!("row references column {j}")));
        }
        if spec.coefs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument("row repeats a column".into()));
        }
        if !spec.rhs.is_finite() || spec.coefs.iter().any(|(_, a)| !a.is_finite()) {
            return Err(Error::InvalidArgument("row has a non-finite entry".into()));
        }
        let uid = self.next_uid;
        self.next_uid += 1;
        self.engine.append_row(&spec, &self.rows, self.num_cols());
        self.rows.push(Row { spec, age: 0, uid });
        Ok(self.rows.len() - 1)
    }

    pub fn add_rows<I: IntoIterator<Item = RowSpec>>(&mut self, rows: I) -> Result<Vec<usize>> {
        rows.into_iter().map(|r| self.add_row(r)).collect()
    }

    /// Removes rows that have had positive slack for at least `min_age`
    /// consecutive solves. The degree equation and rows for which `protect`
    /// returns true are kept. Returns the number of rows removed.
    pub fn delete_slack_rows<F: Fn(&Row) -> bool>(&mut self, min_age: usize, protect: F) -> usize {
        let doomed: Vec<usize> = (0..self.rows.len())
            .filter(|&i| {
                let r = &self.rows[i];
                r.spec.origin != RowOrigin::DegreeEquation
                    && r.age >= min_age.max(1)
                    && !protect(r)
                    && self.engine.logical_is_basic(self.num_cols(), i)
            })
            .collect();
        self.delete_rows(&doomed);
        doomed.len()
    }

    fn delete_rows(&mut self, doomed: &[usize]) {
        if doomed.is_empty() {
            return;
        }
        let ncols = self.num_cols();
        self.engine.delete_rows(doomed, &self.rows, ncols);
        let mut kill = vec![false; self.rows.len()];
        for &i in doomed {
            kill[i] = true;
        }
        let mut i = 0;
        self.rows.retain(|_| {
            let keep = !kill[i];
            i += 1;
            keep
        });
    }

    /// Clamps `x_e` to `value`; undone by [`LinearProgram::undo_bounds`].
    pub fn fix_variable(&mut self, e: usize, value: f64) {
        self.set_bounds(e, value, value);
    }

    pub fn set_bounds(&mut self, e: usize, lo: f64, hi: f64) {
        self.bound_stack.push((e, self.lo[e], self.hi[e]));
        self.lo[e] = lo;
        self.hi[e] = hi;
    }

    /// Current depth of the bound-change stack, for use with `undo_bounds`.
    pub fn bound_mark(&self) -> usize {
        self.bound_stack.len()
    }

    /// Reverts bound changes made after `mark`.
    pub fn undo_bounds(&mut self, mark: usize) {
        while self.bound_stack.len() > mark {
            let (e, lo, hi) = self.bound_stack.pop().unwrap();
            self.lo[e] = lo;
            self.hi[e] = hi;
        }
    }

    /// Solves from the internal basis, or from `warm` when given. Row ages
    /// are updated after an optimal solve.
    pub fn solve(&mut self, warm: Option<&BasisToken>) -> LpSolution {
        self.solve_impl(warm, true)
    }

    /// Like [`LinearProgram::solve`] but leaves row ages untouched, for
    /// exploratory solves such as bound probing.
    pub fn probe(&mut self, warm: Option<&BasisToken>) -> LpSolution {
        self.solve_impl(warm, false)
    }

    fn solve_impl(&mut self, warm: Option<&BasisToken>, age_rows: bool) -> LpSolution {
        let cap = self
            .iteration_cap
            .unwrap_or(50 * (self.rows.len() + self.num_cols()));
        if let Some(token) = warm {
            self.engine.load(token, &self.rows, self.num_cols());
        }
        let outcome = self
            .engine
            .run(&self.cost, &self.lo, &self.hi, &self.rows, cap);
        let ncols = self.num_cols();
        let mut x = self.engine.structural_values(&self.lo, &self.hi, &self.rows, ncols);
        for j in 0..ncols {
            x[j] = x[j].clamp(self.lo[j], self.hi[j]);
        }
        let slacks: Vec<f64> = self.rows.iter().map(|r| r.slack(&x)).collect();
        let objective = match outcome.status {
            LpStatus::Infeasible => f64::INFINITY,
            _ => self.cost.iter().zip(&x).map(|(c, v)| c * v).sum(),
        };
        if age_rows && outcome.status == LpStatus::Optimal {
            for (row, &s) in self.rows.iter_mut().zip(&slacks) {
                if s > BINDING_TOL {
                    row.age += 1;
                } else {
                    row.age = 0;
                }
            }
        }
        let fractional = x
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > INTEGRALITY_TOL && v < 1.0 - INTEGRALITY_TOL)
            .map(|(j, _)| j)
            .collect();
        LpSolution {
            status: outcome.status,
            x,
            objective,
            basis: self.engine.token(&self.rows, ncols),
            fractional,
            slacks,
            iterations: outcome.iterations,
        }
    }
}

/// LP relaxation with the degree equation and the distinct vertex-degree
/// rows `x(δ(v)) >= 1`.
pub fn build_relaxation(h: &Hypergraph) -> Result<LinearProgram> {
    if h.n() < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 vertices, got {}",
            h.n()
        )));
    }
    let mut lp = LinearProgram::new(h.weights().to_vec());
    lp.add_row(RowSpec {
        coefs: h
            .edges()
            .iter()
            .enumerate()
            .map(|(e, verts)| (e, (verts.len() - 1) as f64))
            .collect(),
        relation: Relation::Eq,
        rhs: (h.n() - 1) as f64,
        origin: RowOrigin::DegreeEquation,
        pool_key: None,
    })?;
    let mut seen: HashSet<&[usize]> = HashSet::new();
    for v in 0..h.n() {
        let inc = h.incident(v);
        if inc.is_empty() || !seen.insert(inc) {
            continue;
        }
        lp.add_row(RowSpec {
            coefs: inc.iter().map(|&e| (e, 1.0)).collect(),
            relation: Relation::Ge,
            rhs: 1.0,
            origin: RowOrigin::VertexDegree,
            pool_key: None,
        })?;
    }
    Ok(lp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(n: usize, edges: &[&[usize]], w: &[f64]) -> Hypergraph {
        Hypergraph::new(n, edges.iter().map(|e| e.to_vec()).collect(), w.to_vec()).unwrap()
    }

    fn gadget() -> Hypergraph {
        hg(3, &[&[0, 1], &[1, 2], &[0, 2], &[0, 1, 2]], &[1.0, 1.0, 1.0, 1.9])
    }

    #[test]
    fn degree_row_coefficients() {
        let lp = build_relaxation(&hg(3, &[&[0, 1], &[1, 2], &[0, 1, 2]], &[1.0; 3])).unwrap();
        let r0 = &lp.row(0).spec;
        assert_eq!(r0.coefs, vec![(0, 1.0), (1, 1.0), (2, 2.0)]);
        assert_eq!(r0.rhs, 2.0);
        assert_eq!(r0.relation, Relation::Eq);
    }

    #[test]
    fn duplicate_degree_rows_removed() {
        let lp = build_relaxation(&hg(2, &[&[0, 1]], &[1.0])).unwrap();
        assert_eq!(lp.num_rows(), 2);
        let pairs: Vec<Vec<usize>> = (0..4)
            .flat_map(|a| ((a + 1)..4).map(move |b| vec![a, b]))
            .collect();
        let h = Hypergraph::new(4, pairs, vec![1.0; 6]).unwrap();
        let lp = build_relaxation(&h).unwrap();
        assert_eq!(lp.num_rows(), 5);
    }

    #[test]
    fn too_small_instance() {
        let h = Hypergraph::new(1, vec![], vec![]).unwrap();
        assert!(build_relaxation(&h).is_err());
    }

    #[test]
    fn single_edge() {
        let mut lp = build_relaxation(&hg(2, &[&[0, 1]], &[1.0])).unwrap();
        let sol = lp.solve(None);
        assert!(sol.is_optimal());
        assert!((sol.x[0] - 1.0).abs() < 1e-9);
        assert!((sol.objective - 1.0).abs() < 1e-9);
    }

    #[test]
    fn triple_beats_pairs() {
        let mut lp = build_relaxation(&gadget()).unwrap();
        let sol = lp.solve(None);
        assert!(sol.is_optimal());
        assert!((sol.objective - 1.9).abs() < 1e-9);
        assert!((sol.x[3] - 1.0).abs() < 1e-9);
        assert!(sol.fractional.is_empty());
    }

    #[test]
    fn all_fixed_to_zero_is_infeasible() {
        let mut lp = build_relaxation(&gadget()).unwrap();
        for e in 0..4 {
            lp.fix_variable(e, 0.0);
        }
        assert_eq!(lp.solve(None).status, LpStatus::Infeasible);
    }

    #[test]
    fn fix_and_unfix() {
        let mut lp = build_relaxation(&gadget()).unwrap();
        let mark = lp.bound_mark();
        lp.fix_variable(0, 1.0);
        let sol = lp.solve(None);
        assert!((sol.x[0] - 1.0).abs() < 1e-9);
        assert!((sol.objective - 2.0).abs() < 1e-9);
        lp.undo_bounds(mark);
        assert_eq!(lp.bounds(0), (0.0, 1.0));
        let sol = lp.solve(None);
        assert!((sol.objective - 1.9).abs() < 1e-9);
    }

    #[test]
    fn cut_of_single_edge_vertex_infeasible() {
        // Vertex 3 only touches edge 3.
        let h = hg(4, &[&[0, 1], &[1, 2], &[0, 2], &[2, 3]], &[1.0; 4]);
        let mut lp = build_relaxation(&h).unwrap();
        lp.fix_variable(3, 0.0);
        assert_eq!(lp.solve(None).status, LpStatus::Infeasible);
    }

    #[test]
    fn adding_row_does_not_decrease_objective() {
        // Triangle with cheap pairs and a pendant: LP fills the triangle
        // fractionally until a subtour row is added.
        let h = hg(4, &[&[0, 1], &[1, 2], &[0, 2], &[2, 3]], &[1.0, 1.0, 1.0, 5.0]);
        let mut lp = build_relaxation(&h).unwrap();
        let before = lp.solve(None);
        assert!(before.is_optimal());
        lp.add_row(RowSpec {
            coefs: vec![(0, 1.0), (1, 1.0), (2, 1.0)],
            relation: Relation::Le,
            rhs: 2.0,
            origin: RowOrigin::Subtour,
            pool_key: Some(7),
        })
        .unwrap();
        let after = lp.solve(None);
        assert!(after.is_optimal());
        assert!(after.objective >= before.objective - 1e-7);
        assert!((after.objective - 7.0).abs() < 1e-9);
    }

    #[test]
    fn slack_rows_deleted_only_when_aged() {
        let h = hg(3, &[&[0, 1], &[1, 2], &[0, 2]], &[1.0, 1.0, 3.0]);
        let mut lp = build_relaxation(&h).unwrap();
        let loose = lp
            .add_row(RowSpec {
                coefs: vec![(0, 1.0), (1, 1.0)],
                relation: Relation::Le,
                rhs: 2.4,
                origin: RowOrigin::Subtour,
                pool_key: None,
            })
            .unwrap();
        let tight = lp
            .add_row(RowSpec {
                coefs: vec![(0, 1.0), (1, 1.0), (2, 1.0)],
                relation: Relation::Le,
                rhs: 2.0,
                origin: RowOrigin::Subtour,
                pool_key: None,
            })
            .unwrap();
        let sol = lp.solve(None);
        assert!((sol.slacks[loose] - 0.4).abs() < 1e-9);
        assert!(sol.slacks[tight].abs() < 1e-9);
        let keep_degree = |r: &Row| r.spec.origin == RowOrigin::VertexDegree;
        assert_eq!(lp.delete_slack_rows(2, keep_degree), 0);
        for _ in 0..2 {
            lp.solve(None);
        }
        assert!(lp.row(loose).age >= 2);
        let before = lp.num_rows();
        assert_eq!(lp.delete_slack_rows(2, keep_degree), 1);
        assert_eq!(lp.num_rows(), before - 1);
        assert!(lp.rows().iter().any(|r| r.spec.rhs == 2.0 && r.spec.coefs.len() == 3));
        let sol = lp.solve(None);
        assert!((sol.objective - 2.0).abs() < 1e-9);
    }

    #[test]
    fn warm_start_token_round_trip() {
        let mut lp = build_relaxation(&gadget()).unwrap();
        let first = lp.solve(None);
        lp.fix_variable(3, 0.0);
        let probe = lp.solve(None);
        assert!((probe.objective - 2.0).abs() < 1e-9);
        lp.undo_bounds(0);
        let again = lp.solve(Some(&first.basis));
        assert_eq!(again.iterations, 0);
        assert_eq!(again.x, first.x);
    }
}
