//! Branch-and-cut driver. Each node runs an optimize/separate loop over
//! subtour inequalities until none is violated, then either accepts an
//! integral tree or branches on a variable chosen by pseudo costs.

mod cutoff;
mod heuristic;
mod pseudocost;

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};
use std::hash::{Hash, Hasher};
use std::time::{Duration, Instant};

use serde::Serialize;

pub use cutoff::{cutoff_test, cutoff_threshold, CUTOFF_TOL};
pub use heuristic::primal_heuristic;
pub use pseudocost::{
    down_cost, probe_set, refresh_count, score, select_branch_variable, up_cost, PseudoCost,
    PseudoCostTable,
};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexSubset, VIOLATION_TOL};
use crate::lp::{build_relaxation, BasisToken, LinearProgram, LpSolution, LpStatus, Row, BINDING_TOL};
use crate::oracle::is_spanning_tree;
use crate::pool::{ConstraintPool, ExperimentMode, SOS_STRATA};
use crate::separation::{separate_exact, separate_zero_weight, SeparationMode};
use crate::strengthen::{strengthen_all, StrengthenConfig};
use crate::subtour::SubtourConstraint;

/// Tolerance for calling a solution value integral.
pub use crate::lp::INTEGRALITY_TOL;

/// Age (in consecutive slack solves) after which a row may be dropped.
const ROW_DELETE_AGE: usize = 2;

/// Minimum objective increase that counts as progress for row deletion.
const PROGRESS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverConfig {
    pub time_limit: Option<Duration>,
    pub node_limit: Option<usize>,
    pub mode: ExperimentMode,
    /// Add `V - S` next to every subtour `S` found. Always on in the
    /// large and small modes.
    pub complementary: bool,
    /// Tighten the cutoff by almost one unit when all weights are integers.
    pub integrality_delta: bool,
    /// Nonzero budget of the constraint pool.
    pub pool_budget: usize,
    pub seed: u64,
    /// Stop after the root subtour relaxation has converged.
    pub root_only: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            time_limit: None,
            node_limit: None,
            mode: ExperimentMode::Both,
            complementary: false,
            integrality_delta: false,
            pool_budget: 2_000_000,
            seed: 0,
            root_only: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    /// Root relaxation converged and the search was not continued.
    RootOnly,
    TimeLimit,
    NodeLimit,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SolveStats {
    /// Optimize/separate iterations at the root: rounds of solving over the
    /// pool until it is satisfied, each followed by one separator call.
    pub root_iterations: usize,
    /// Optimize/separate iterations over all nodes.
    pub iterations: usize,
    /// LP solves inside optimize/separate loops.
    pub lp_solves: usize,
    /// LP solves spent probing pseudo costs.
    pub probe_solves: usize,
    pub separation_rounds: usize,
    pub nodes_created: usize,
    pub nodes_processed: usize,
    pub root_bound: f64,
    pub lower_bound: f64,
    pub gap_ppm: f64,
    /// Fractional variables in the final root LP.
    pub root_fractional: usize,
    pub pool_size: usize,
    pub lp_rows: usize,
    pub lp_ms: f64,
    pub separation_ms: f64,
    pub branching_ms: f64,
    pub total_ms: f64,
    /// Distinct subtour constraints ever added to the LP, by `|S|`.
    /// Vertex-degree rows count as subtours on `n - 1` vertices.
    pub histogram: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// Best tree found, sorted edge indices.
    pub tree: Option<Vec<usize>>,
    /// Weight of `tree`, `+inf` when there is none.
    pub objective: f64,
    pub stats: SolveStats,
}

/// A node of the search tree. Nodes carry everything needed to resume them
/// independently: fixings, inherited pseudo costs and a warm-start basis.
#[derive(Debug, Clone)]
pub struct BnCNode {
    pub id: u64,
    pub parent: Option<u64>,
    pub depth: usize,
    /// `(edge, value)` pairs fixed along the path from the root.
    pub fixings: Vec<(usize, bool)>,
    /// Lower bound inherited from the parent's LP.
    pub bound: f64,
    pub pseudo: PseudoCostTable,
    pub basis: Option<BasisToken>,
    /// Pool keys of rows tight in the parent's final LP.
    binding: Vec<u64>,
}

/// Result of processing one node.
#[derive(Debug)]
pub enum NodeOutcome {
    Integral { tree: Vec<usize>, objective: f64 },
    Branched(Vec<BnCNode>),
    Cutoff,
    Infeasible,
    /// Converged root relaxation when the solve is root-only.
    Relaxed { bound: f64 },
    /// Time limit hit inside the node.
    Interrupted,
}

struct Queued(BnCNode, u64);

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Queued {}
impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Queued {
    // BinaryHeap is a max-heap: smallest bound first, then oldest.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .bound
            .total_cmp(&self.0.bound)
            .then(other.1.cmp(&self.1))
    }
}

/// Solver state shared by all nodes of one solve.
pub struct Solver<'a> {
    h: &'a Hypergraph,
    config: SolverConfig,
    integral_objective: bool,
    lp: LinearProgram,
    pool: ConstraintPool,
    strengthen: StrengthenConfig,
    separation_mode: SeparationMode,
    incumbent: Option<(Vec<usize>, f64)>,
    stats: SolveStats,
    activated: HashSet<u64>,
    start: Instant,
    next_id: u64,
    stamp: u64,
}

fn node_hash(seed: u64, id: u64) -> u64 {
    let mut s = DefaultHasher::new();
    (seed, id).hash(&mut s);
    s.finish()
}

/// Distinct vertex pairs that lie together in at least two edges.
fn shared_pairs(h: &Hypergraph) -> Vec<(usize, usize)> {
    let mut count: HashMap<(usize, usize), usize> = HashMap::new();
    for e in h.edges() {
        for (i, &u) in e.iter().enumerate() {
            for &v in &e[i + 1..] {
                *count.entry((u, v)).or_default() += 1;
            }
        }
    }
    let mut pairs: Vec<(usize, usize)> = count
        .into_iter()
        .filter(|&(_, c)| c >= 2)
        .map(|(p, _)| p)
        .collect();
    pairs.sort_unstable();
    pairs
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

impl<'a> Solver<'a> {
    pub fn new(h: &'a Hypergraph, config: SolverConfig) -> Result<Self> {
        if !h.is_connected() {
            return Err(Error::Infeasible("hypergraph is not connected".into()));
        }
        let integral_objective = config.integrality_delta && h.has_integral_weights();
        if config.integrality_delta && !h.has_integral_weights() {
            log::warn!("integrality delta requested but weights are not all integral; disabled");
        }
        let lp = build_relaxation(h)?;
        let biased = config.mode == ExperimentMode::Both;
        let strengthen = StrengthenConfig {
            complementary: config.complementary || !biased,
            ..StrengthenConfig::default()
        };
        let mut solver = Self {
            h,
            pool: ConstraintPool::new(config.pool_budget),
            separation_mode: if biased {
                SeparationMode::Biased
            } else {
                SeparationMode::Unbiased
            },
            integral_objective,
            lp,
            strengthen,
            incumbent: None,
            stats: SolveStats::default(),
            activated: HashSet::new(),
            start: Instant::now(),
            next_id: 0,
            stamp: 0,
            config,
        };
        solver.record_degree_rows();
        if biased {
            solver.seed_pairs()?;
        }
        Ok(solver)
    }

    /// Vertex-degree rows are subtours on `V - v`; count one per distinct row.
    fn record_degree_rows(&mut self) {
        let n = self.h.n();
        let mut seen = HashSet::new();
        for v in 0..n {
            if !seen.insert(self.h.incident(v).to_vec()) {
                continue;
            }
            let others = VertexSubset::new(n, (0..n).filter(|&u| u != v).collect())
                .expect("vertex ids in range");
            if let Ok(c) = SubtourConstraint::subtour(self.h, &others) {
                if self.activated.insert(c.key().hash64()) {
                    *self.stats.histogram.entry(n - 1).or_default() += 1;
                }
            }
        }
    }

    /// Puts every two-vertex subtour that involves more than one edge into
    /// the pool and the initial LP.
    fn seed_pairs(&mut self) -> Result<()> {
        let n = self.h.n();
        if n < 3 {
            return Ok(());
        }
        for (u, v) in shared_pairs(self.h) {
            let s = VertexSubset::new(n, vec![u, v])?;
            let c = SubtourConstraint::subtour(self.h, &s)?;
            let (key, _) = self.pool.insert(self.h, c);
            self.activate(key)?;
        }
        Ok(())
    }

    fn activate(&mut self, key: u64) -> Result<()> {
        let Some(entry) = self.pool.get(key) else {
            return Ok(());
        };
        let row = entry.row.clone();
        let size = entry.constraint.size();
        self.lp.add_row(row)?;
        self.pool.mark_added(key);
        if self.activated.insert(key) {
            *self.stats.histogram.entry(size).or_default() += 1;
        }
        Ok(())
    }

    fn timed_out(&self) -> bool {
        self.config
            .time_limit
            .is_some_and(|t| self.start.elapsed() >= t)
    }

    fn incumbent_value(&self) -> f64 {
        self.incumbent.as_ref().map_or(f64::INFINITY, |(_, w)| *w)
    }

    fn cut_off(&self, z: f64) -> bool {
        cutoff_test(z, self.incumbent_value(), self.integral_objective)
    }

    fn offer_incumbent(&mut self, tree: Vec<usize>) {
        let w: f64 = tree.iter().map(|&e| self.h.weight(e)).sum();
        if w < self.incumbent_value() {
            log::debug!("new incumbent {w}");
            self.incumbent = Some((tree, w));
        }
    }

    fn lp_keys(&self) -> HashSet<u64> {
        self.lp.rows().iter().filter_map(|r| r.spec.pool_key).collect()
    }

    fn apply_fixings(&mut self, fixings: &[(usize, bool)]) {
        self.lp.undo_bounds(0);
        for &(e, v) in fixings {
            self.lp.fix_variable(e, if v { 1.0 } else { 0.0 });
        }
    }

    fn solve_lp(&mut self, warm: Option<&BasisToken>) -> Result<LpSolution> {
        let t = Instant::now();
        let sol = self.lp.solve(warm);
        self.stats.lp_ms += ms(t.elapsed());
        if sol.status == LpStatus::IterationLimit {
            return Err(Error::Contract(format!(
                "LP iteration limit with {} rows",
                self.lp.num_rows()
            )));
        }
        Ok(sol)
    }

    /// Violated pool rows that pass the mode filter and are picked by the
    /// SOS scan, excluding rows already in the LP.
    fn pool_hits(&mut self, x: &[f64]) -> Vec<u64> {
        let in_lp = self.lp_keys();
        self.pool
            .sos_scan_filtered(x, SOS_STRATA, self.config.mode, self.h.n())
            .into_iter()
            .filter(|k| !in_lp.contains(k))
            .collect()
    }

    /// Runs the separators on `x`, strengthens what they find and stores
    /// the result in the pool. Returns the pool keys of the violated
    /// constraints in the batch.
    fn separate(&mut self, x: &[f64]) -> Result<Vec<u64>> {
        let t = Instant::now();
        self.stats.separation_rounds += 1;
        let mut raw: Vec<VertexSubset> = Vec::new();
        if self.separation_mode == SeparationMode::Biased {
            raw = separate_zero_weight(self.h, x)
                .subtours
                .into_iter()
                .map(|s| s.subset)
                .collect();
        }
        if raw.is_empty() {
            raw = separate_exact(self.h, x, self.separation_mode)?
                .subtours
                .into_iter()
                .map(|s| s.subset)
                .collect();
        }
        let batch = strengthen_all(self.h, x, &raw, &self.strengthen);
        let mut violated = Vec::new();
        for c in batch.constraints {
            let is_violated = c.violation(self.h, x) > VIOLATION_TOL;
            let (key, _) = self.pool.insert(self.h, c);
            if is_violated {
                violated.push(key);
            }
        }
        self.stats.separation_ms += ms(t.elapsed());
        Ok(violated)
    }

    fn set_binding(&mut self, sol: &LpSolution, extra: &HashSet<u64>) {
        let mut keys: HashSet<u64> = extra.clone();
        for (row, &s) in self.lp.rows().iter().zip(&sol.slacks) {
            if let Some(k) = row.spec.pool_key {
                if s <= BINDING_TOL {
                    keys.insert(k);
                }
            }
        }
        self.pool.set_binding(keys);
    }

    /// Optimize/separate loop over the current fixings. Each iteration
    /// re-solves the LP, pulling violated pool rows in through the SOS scan,
    /// until the pool is satisfied, and then calls the separators once.
    /// Returns the final LP solution or the outcome that ended the node
    /// early.
    fn cut_loop(
        &mut self,
        warm: Option<BasisToken>,
        open_binding: &HashSet<u64>,
        is_root: bool,
    ) -> Result<std::result::Result<LpSolution, NodeOutcome>> {
        let mut warm = warm;
        let mut last_objective = f64::NEG_INFINITY;
        loop {
            if self.timed_out() {
                return Ok(Err(NodeOutcome::Interrupted));
            }
            let sol = self.solve_lp(warm.take().as_ref())?;
            self.stats.lp_solves += 1;
            if sol.status == LpStatus::Infeasible {
                return Ok(Err(NodeOutcome::Infeasible));
            }
            if self.cut_off(sol.objective) {
                return Ok(Err(NodeOutcome::Cutoff));
            }
            self.set_binding(&sol, open_binding);
            let mut hits = self.pool_hits(&sol.x);
            if hits.is_empty() {
                self.stats.iterations += 1;
                if is_root {
                    self.stats.root_iterations += 1;
                }
                let found = self.separate(&sol.x)?;
                if found.is_empty() {
                    return Ok(Ok(sol));
                }
                hits = self.pool_hits(&sol.x);
                if hits.is_empty() {
                    // Violated rows the scan skipped, e.g. ones marked binding
                    // for another node.
                    let in_lp = self.lp_keys();
                    hits = found.into_iter().filter(|k| !in_lp.contains(k)).collect();
                    hits.sort_unstable();
                    hits.dedup();
                }
                if hits.is_empty() {
                    log::warn!("separator reports violations already present in the LP");
                    return Ok(Ok(sol));
                }
            }
            if sol.objective > last_objective + PROGRESS_TOL {
                let pool = &self.pool;
                let protect = |r: &Row| r.spec.pool_key.is_some_and(|k| pool.is_binding(k));
                self.lp.delete_slack_rows(ROW_DELETE_AGE, protect);
            }
            last_objective = sol.objective;
            if log::log_enabled!(log::Level::Trace) {
                let sizes: Vec<usize> = hits
                    .iter()
                    .filter_map(|k| self.pool.get(*k).map(|e| e.constraint.size()))
                    .collect();
                log::trace!("z = {:.6}, adding sizes {sizes:?}", sol.objective);
            }
            for key in hits {
                self.activate(key)?;
            }
        }
    }

    fn is_integral(x: &[f64]) -> bool {
        x.iter()
            .all(|&v| v <= INTEGRALITY_TOL || v >= 1.0 - INTEGRALITY_TOL)
    }

    /// Recomputes pseudo costs for the probe set of `node`. Returns the
    /// fixings implied by infeasible (or cut off) probes, or `None` when
    /// both directions of some variable are infeasible.
    fn update_pseudo_costs(&mut self, node: &mut BnCNode, sol: &LpSolution) -> Option<Vec<(usize, bool)>> {
        let t = Instant::now();
        let probes = probe_set(&node.pseudo, &sol.fractional, node_hash(self.config.seed, node.id));
        let z = sol.objective;
        let mut fixes = Vec::new();
        let mut infeasible = false;
        for e in probes {
            let xe = sol.x[e];
            let bound = |s: &mut Self, v: f64| {
                let mark = s.lp.bound_mark();
                s.lp.fix_variable(e, v);
                let p = s.lp.probe(Some(&sol.basis));
                s.lp.undo_bounds(mark);
                s.stats.probe_solves += 1;
                match p.status {
                    LpStatus::Optimal if !s.cut_off(p.objective) => p.objective,
                    LpStatus::Optimal | LpStatus::Infeasible => f64::INFINITY,
                    // An unfinished probe says nothing; treat it as no change.
                    LpStatus::IterationLimit => z,
                }
            };
            let z0 = bound(self, 0.0);
            let z1 = bound(self, 1.0);
            self.stamp += 1;
            let (c0, c1) = (down_cost(z, z0, xe), up_cost(z, z1, xe));
            node.pseudo.set(e, c0, c1, self.stamp);
            match (c0.is_infinite(), c1.is_infinite()) {
                (true, true) => infeasible = true,
                (true, false) => fixes.push((e, true)),
                (false, true) => fixes.push((e, false)),
                (false, false) => {}
            }
        }
        self.stats.branching_ms += ms(t.elapsed());
        (!infeasible).then_some(fixes)
    }

    fn new_id(&mut self) -> u64 {
        let id = self.next_id;
        self.next_id += 1;
        id
    }

    /// Runs the optimize/separate loop at `node`, then accepts an integral
    /// tree, prunes, or branches.
    pub fn process_node(&mut self, mut node: BnCNode, open_binding: &HashSet<u64>) -> Result<NodeOutcome> {
        let is_root = node.parent.is_none();
        let mut warm = node.basis.take();
        loop {
            self.apply_fixings(&node.fixings);
            let sol = match self.cut_loop(warm.take(), open_binding, is_root)? {
                Ok(sol) => sol,
                Err(outcome) => return Ok(outcome),
            };
            if is_root {
                self.stats.root_bound = sol.objective;
                self.stats.root_fractional = sol.fractional.len();
            }
            if Self::is_integral(&sol.x) {
                let tree: Vec<usize> = (0..sol.x.len()).filter(|&e| sol.x[e] > 0.5).collect();
                if !is_spanning_tree(self.h, &tree) {
                    return Err(Error::Contract(
                        "integral LP solution satisfying all subtours is not a spanning tree".into(),
                    ));
                }
                let objective = tree.iter().map(|&e| self.h.weight(e)).sum();
                return Ok(NodeOutcome::Integral { tree, objective });
            }
            if let Some(tree) = primal_heuristic(self.h, &sol.x) {
                self.offer_incumbent(tree);
            }
            if self.cut_off(sol.objective) {
                return Ok(NodeOutcome::Cutoff);
            }
            if self.config.root_only && is_root {
                return Ok(NodeOutcome::Relaxed { bound: sol.objective });
            }
            let Some(fixes) = self.update_pseudo_costs(&mut node, &sol) else {
                return Ok(NodeOutcome::Infeasible);
            };
            if !fixes.is_empty() {
                log::debug!("node {}: {} variables fixed by probing", node.id, fixes.len());
                node.fixings.extend(fixes);
                warm = Some(sol.basis.clone());
                continue;
            }
            let Some(e) = select_branch_variable(&node.pseudo, &sol.x, &sol.fractional) else {
                return Err(Error::Contract("no branching candidate among fractional variables".into()));
            };
            let binding: Vec<u64> = self
                .lp
                .rows()
                .iter()
                .zip(&sol.slacks)
                .filter(|(_, &s)| s <= BINDING_TOL)
                .filter_map(|(r, _)| r.spec.pool_key)
                .collect();
            let mut children = Vec::with_capacity(2);
            for value in [false, true] {
                let mut fixings = node.fixings.clone();
                fixings.push((e, value));
                children.push(BnCNode {
                    id: self.new_id(),
                    parent: Some(node.id),
                    depth: node.depth + 1,
                    fixings,
                    bound: sol.objective,
                    pseudo: node.pseudo.clone(),
                    basis: Some(sol.basis.clone()),
                    binding: binding.clone(),
                });
            }
            return Ok(NodeOutcome::Branched(children));
        }
    }

    fn root_node(&mut self) -> BnCNode {
        BnCNode {
            id: self.new_id(),
            parent: None,
            depth: 0,
            fixings: Vec::new(),
            bound: f64::NEG_INFINITY,
            pseudo: PseudoCostTable::new(self.h.num_edges()),
            basis: None,
            binding: Vec::new(),
        }
    }

    /// Best-bound search from the root until the tree is exhausted or a
    /// limit is hit.
    pub fn run(mut self) -> Result<SolveOutcome> {
        let mut heap = BinaryHeap::new();
        let mut seq = 0u64;
        let root = self.root_node();
        self.stats.nodes_created = 1;
        heap.push(Queued(root, seq));
        let mut status = SolveStatus::Optimal;
        let mut relaxed_bound = None;
        while let Some(Queued(node, _)) = heap.pop() {
            if self.cut_off(node.bound) {
                continue;
            }
            if self.timed_out() {
                status = SolveStatus::TimeLimit;
                heap.push(Queued(node, 0));
                break;
            }
            if self
                .config
                .node_limit
                .is_some_and(|limit| self.stats.nodes_processed >= limit)
            {
                status = SolveStatus::NodeLimit;
                heap.push(Queued(node, 0));
                break;
            }
            let open_binding: HashSet<u64> = heap
                .iter()
                .flat_map(|q| q.0.binding.iter().copied())
                .collect();
            let parent_bound = node.bound;
            self.stats.nodes_processed += 1;
            match self.process_node(node.clone(), &open_binding)? {
                NodeOutcome::Integral { tree, .. } => self.offer_incumbent(tree),
                NodeOutcome::Branched(children) => {
                    for child in children {
                        debug_assert!(child.bound >= parent_bound - 1e-7);
                        seq += 1;
                        self.stats.nodes_created += 1;
                        heap.push(Queued(child, seq));
                    }
                }
                NodeOutcome::Cutoff | NodeOutcome::Infeasible => {}
                NodeOutcome::Relaxed { bound } => {
                    status = SolveStatus::RootOnly;
                    relaxed_bound = Some(bound);
                    break;
                }
                NodeOutcome::Interrupted => {
                    status = SolveStatus::TimeLimit;
                    heap.push(Queued(node, 0));
                    break;
                }
            }
        }
        let ub = self.incumbent_value();
        let lb = match relaxed_bound {
            Some(b) => b,
            None if heap.is_empty() => ub,
            None => heap
                .iter()
                .map(|q| q.0.bound)
                .fold(ub, f64::min),
        };
        self.stats.lower_bound = lb;
        self.stats.gap_ppm = if ub.is_finite() && ub != 0.0 && lb.is_finite() {
            (1e6 * (ub - lb) / ub).max(0.0)
        } else if ub.is_finite() && lb >= ub {
            0.0
        } else {
            f64::INFINITY
        };
        self.stats.pool_size = self.pool.len();
        self.stats.lp_rows = self.lp.num_rows();
        self.stats.total_ms = ms(self.start.elapsed());
        if status == SolveStatus::Optimal && self.incumbent.is_none() {
            return Err(Error::Infeasible("search ended without a spanning tree".into()));
        }
        let (tree, objective) = match self.incumbent {
            Some((t, w)) => (Some(t), w),
            None => (None, f64::INFINITY),
        };
        Ok(SolveOutcome {
            status,
            tree,
            objective,
            stats: self.stats,
        })
    }
}

/// Minimum spanning tree of `h` by branch and cut.
pub fn solve(h: &Hypergraph, config: &SolverConfig) -> Result<SolveOutcome> {
    if h.n() <= 1 {
        return Ok(SolveOutcome {
            status: SolveStatus::Optimal,
            tree: Some(Vec::new()),
            objective: 0.0,
            stats: SolveStats::default(),
        });
    }
    Solver::new(h, config.clone())?.run()
}
