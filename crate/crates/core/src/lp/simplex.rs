//! Bounded dual simplex on `A x - s = 0` with one logical `s_i` per row.
//!
//! Every variable is boxed. Logicals get the row's bound on one side and a
//! bound just past the row's reachable activity on the other, so a basis can
//! always be made dual feasible by moving nonbasics to the bound matching the
//! sign of their reduced cost. The basis inverse is kept as a dense matrix
//! with rank-one pivot updates and periodic refactorization, which is plenty
//! for the row counts produced by the cutting-plane loop.

use std::collections::HashMap;

use super::{LpStatus, Relation, Row, RowSpec};

const NONBASIC: usize = usize::MAX;
const PRIMAL_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const SINGULAR_TOL: f64 = 1e-11;
const DEGENERATE_SWITCH: usize = 1000;
const MIN_REFACTOR_INTERVAL: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum VarRef {
    Col(usize),
    Row(u64),
}

/// Opaque snapshot of a simplex basis. It refers to rows by identity, so it
/// stays usable after rows are added or removed; rows unknown to the token
/// start with their logical basic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BasisToken {
    basic: Vec<VarRef>,
    upper: Vec<VarRef>,
    rows: Vec<u64>,
}

pub(super) struct Outcome {
    pub status: LpStatus,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub(super) struct Engine {
    ncols: usize,
    columns: Vec<Vec<(usize, f64)>>,
    row_lo: Vec<f64>,
    row_hi: Vec<f64>,
    head: Vec<usize>,
    pos: Vec<usize>,
    at_upper: Vec<bool>,
    /// Row-major `m x m`; row index = basis position, column index = LP row.
    binv: Vec<f64>,
    xb: Vec<f64>,
    valid: bool,
    pivots: usize,
}

fn logical_bounds(spec: &RowSpec) -> (f64, f64) {
    let min_act: f64 = spec.coefs.iter().map(|&(_, a)| a.min(0.0)).sum();
    let max_act: f64 = spec.coefs.iter().map(|&(_, a)| a.max(0.0)).sum();
    match spec.relation {
        Relation::Le => ((min_act - 1.0).min(spec.rhs), spec.rhs),
        Relation::Ge => (spec.rhs, (max_act + 1.0).max(spec.rhs)),
        Relation::Eq => (spec.rhs, spec.rhs),
    }
}

fn infeasibility(v: f64, lo: f64, hi: f64) -> f64 {
    if v < lo - PRIMAL_TOL * (1.0 + lo.abs()) {
        lo - v
    } else if v > hi + PRIMAL_TOL * (1.0 + hi.abs()) {
        v - hi
    } else {
        0.0
    }
}

impl Engine {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            columns: vec![Vec::new(); ncols],
            row_lo: Vec::new(),
            row_hi: Vec::new(),
            head: Vec::new(),
            pos: vec![NONBASIC; ncols],
            at_upper: vec![false; ncols],
            binv: Vec::new(),
            xb: Vec::new(),
            valid: true,
            pivots: 0,
        }
    }

    fn m(&self) -> usize {
        self.head.len()
    }

    fn bounds(&self, j: usize, lo: &[f64], hi: &[f64]) -> (f64, f64) {
        if j < self.ncols {
            (lo[j], hi[j])
        } else {
            (self.row_lo[j - self.ncols], self.row_hi[j - self.ncols])
        }
    }

    fn nonbasic_value(&self, j: usize, lo: &[f64], hi: &[f64]) -> f64 {
        let (l, u) = self.bounds(j, lo, hi);
        if self.at_upper[j] {
            u
        } else {
            l
        }
    }

    pub fn logical_is_basic(&self, ncols: usize, i: usize) -> bool {
        self.pos[ncols + i] != NONBASIC
    }

    pub fn append_row(&mut self, spec: &RowSpec, _rows: &[Row], ncols: usize) {
        let m = self.m();
        let i = m;
        for &(j, a) in &spec.coefs {
            self.columns[j].push((i, a));
        }
        let (l, u) = logical_bounds(spec);
        self.row_lo.push(l);
        self.row_hi.push(u);
        let var = ncols + i;
        self.pos.push(m);
        self.at_upper.push(false);
        self.head.push(var);
        self.xb.push(0.0);
        if !self.valid {
            return;
        }
        // New inverse is [[Binv, 0], [a_B^T Binv, -1]].
        let mut a_b = vec![0.0; m];
        for &(j, a) in &spec.coefs {
            if self.pos[j] != NONBASIC {
                a_b[self.pos[j]] = a;
            }
        }
        let mut w = vec![0.0; m];
        for (k, &ak) in a_b.iter().enumerate() {
            if ak != 0.0 {
                let row = &self.binv[k * m..(k + 1) * m];
                for (wi, &b) in w.iter_mut().zip(row) {
                    *wi += ak * b;
                }
            }
        }
        let n1 = m + 1;
        let mut binv = vec![0.0; n1 * n1];
        for k in 0..m {
            binv[k * n1..k * n1 + m].copy_from_slice(&self.binv[k * m..(k + 1) * m]);
        }
        binv[m * n1..m * n1 + m].copy_from_slice(&w);
        binv[m * n1 + m] = -1.0;
        self.binv = binv;
    }

    pub fn delete_rows(&mut self, doomed: &[usize], rows: &[Row], ncols: usize) {
        let m = self.m();
        let mut kill = vec![false; m];
        for &i in doomed {
            kill[i] = true;
        }
        let all_basic = doomed.iter().all(|&i| self.pos[ncols + i] != NONBASIC);
        let mut new_index = vec![NONBASIC; m];
        let mut next = 0;
        for i in 0..m {
            if !kill[i] {
                new_index[i] = next;
                next += 1;
            }
        }
        let m2 = next;
        let remap = |j: usize| -> usize {
            if j < ncols {
                j
            } else {
                ncols + new_index[j - ncols]
            }
        };

        if all_basic {
            let kill_pos: Vec<bool> = {
                let mut kp = vec![false; m];
                for &i in doomed {
                    kp[self.pos[ncols + i]] = true;
                }
                kp
            };
            let mut binv = Vec::with_capacity(m2 * m2);
            let mut head = Vec::with_capacity(m2);
            let mut xb = Vec::with_capacity(m2);
            for k in 0..m {
                if kill_pos[k] {
                    continue;
                }
                if self.valid {
                    let row = &self.binv[k * m..(k + 1) * m];
                    binv.extend(row.iter().enumerate().filter(|(i, _)| !kill[*i]).map(|(_, &b)| b));
                }
                head.push(remap(self.head[k]));
                xb.push(self.xb[k]);
            }
            let mut at_upper = vec![false; ncols + m2];
            at_upper[..ncols].copy_from_slice(&self.at_upper[..ncols]);
            for i in 0..m {
                if !kill[i] {
                    at_upper[ncols + new_index[i]] = self.at_upper[ncols + i];
                }
            }
            self.binv = binv;
            self.head = head;
            self.xb = xb;
            self.at_upper = at_upper;
        } else {
            self.at_upper = vec![false; ncols + m2];
            self.head = (0..m2).map(|i| ncols + i).collect();
            self.xb = vec![0.0; m2];
            self.valid = false;
        }
        self.pos = vec![NONBASIC; ncols + m2];
        for (k, &j) in self.head.iter().enumerate() {
            self.pos[j] = k;
        }
        self.row_lo = (0..m).filter(|&i| !kill[i]).map(|i| self.row_lo[i]).collect();
        self.row_hi = (0..m).filter(|&i| !kill[i]).map(|i| self.row_hi[i]).collect();
        self.columns = vec![Vec::new(); ncols];
        for (i, row) in rows.iter().enumerate().filter(|(i, _)| !kill[*i]) {
            let _ = i;
            let ni = new_index[i];
            for &(j, a) in &row.spec.coefs {
                self.columns[j].push((ni, a));
            }
        }
    }

    pub fn token(&self, rows: &[Row], ncols: usize) -> BasisToken {
        let as_ref = |j: usize| {
            if j < ncols {
                VarRef::Col(j)
            } else {
                VarRef::Row(rows[j - ncols].uid)
            }
        };
        BasisToken {
            basic: self.head.iter().map(|&j| as_ref(j)).collect(),
            upper: (0..self.at_upper.len())
                .filter(|&j| self.at_upper[j] && self.pos[j] == NONBASIC)
                .map(as_ref)
                .collect(),
            rows: rows.iter().map(|r| r.uid).collect(),
        }
    }

    /// Adopts the basis described by `token`. Keeps the current basis if the
    /// token cannot be mapped onto the present row set.
    pub fn load(&mut self, token: &BasisToken, rows: &[Row], ncols: usize) {
        let m = self.m();
        let index_of: HashMap<u64, usize> =
            rows.iter().enumerate().map(|(i, r)| (r.uid, i)).collect();
        let resolve = |r: &VarRef| -> Option<usize> {
            match *r {
                VarRef::Col(j) => (j < ncols).then_some(j),
                VarRef::Row(uid) => index_of.get(&uid).map(|&i| ncols + i),
            }
        };
        let mut in_token = vec![false; m];
        for uid in &token.rows {
            if let Some(&i) = index_of.get(uid) {
                in_token[i] = true;
            }
        }
        let mut is_basic = vec![false; ncols + m];
        let mut head: Vec<usize> = Vec::with_capacity(m);
        for r in &token.basic {
            if let Some(j) = resolve(r) {
                if !is_basic[j] {
                    is_basic[j] = true;
                    head.push(j);
                }
            }
        }
        let mut upper = vec![false; ncols + m];
        for r in &token.upper {
            if let Some(j) = resolve(r) {
                upper[j] = true;
            }
        }
        // Rows the token has never seen keep their logical basic.
        for i in 0..m {
            if !in_token[i] && !is_basic[ncols + i] {
                is_basic[ncols + i] = true;
                head.push(ncols + i);
            }
        }
        for i in 0..m {
            if head.len() >= m {
                break;
            }
            if !is_basic[ncols + i] {
                is_basic[ncols + i] = true;
                head.push(ncols + i);
            }
        }
        if head.len() != m {
            return;
        }
        for (j, up) in upper.iter_mut().enumerate() {
            if is_basic[j] {
                *up = false;
            }
        }
        let same_basis = self.valid && head == self.head;
        self.at_upper = upper;
        if same_basis {
            return;
        }
        self.pos = vec![NONBASIC; ncols + m];
        for (k, &j) in head.iter().enumerate() {
            self.pos[j] = k;
        }
        self.head = head;
        self.valid = false;
    }

    fn slack_basis(&mut self) {
        let m = self.m();
        let ncols = self.ncols;
        self.head = (0..m).map(|i| ncols + i).collect();
        self.pos = vec![NONBASIC; ncols + m];
        for (k, &j) in self.head.iter().enumerate() {
            self.pos[j] = k;
        }
        self.binv = vec![0.0; m * m];
        for k in 0..m {
            self.binv[k * m + k] = -1.0;
        }
        self.valid = true;
        self.pivots = 0;
    }

    /// Rebuilds the basis inverse by Gauss-Jordan elimination with partial
    /// pivoting. Returns false when the basis is numerically singular.
    fn refactor(&mut self) -> bool {
        let m = self.m();
        let ncols = self.ncols;
        // Work on [B | I] stored as two m x m blocks, rows = LP rows.
        let mut b = vec![0.0; m * m];
        for (k, &j) in self.head.iter().enumerate() {
            if j < ncols {
                for &(i, a) in &self.columns[j] {
                    b[i * m + k] = a;
                }
            } else {
                b[(j - ncols) * m + k] = -1.0;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for col in 0..m {
            let (mut best, mut best_abs) = (col, 0.0);
            for r in col..m {
                let v = b[r * m + col].abs();
                if v > best_abs {
                    best = r;
                    best_abs = v;
                }
            }
            if best_abs < SINGULAR_TOL {
                return false;
            }
            if best != col {
                for c in 0..m {
                    b.swap(best * m + c, col * m + c);
                    inv.swap(best * m + c, col * m + c);
                }
            }
            let p = b[col * m + col];
            for c in 0..m {
                b[col * m + c] /= p;
                inv[col * m + c] /= p;
            }
            let (pb, pi) = (b[col * m..(col + 1) * m].to_vec(), inv[col * m..(col + 1) * m].to_vec());
            for r in 0..m {
                if r == col {
                    continue;
                }
                let f = b[r * m + col];
                if f == 0.0 {
                    continue;
                }
                for c in 0..m {
                    b[r * m + c] -= f * pb[c];
                }
                for c in 0..m {
                    if pi[c] != 0.0 {
                        inv[r * m + c] -= f * pi[c];
                    }
                }
            }
        }
        // After elimination, row `col` of `inv` belongs to basis position
        // `col` (B's column index), which is exactly our layout.
        self.binv = inv;
        self.valid = true;
        self.pivots = 0;
        true
    }

    fn ensure_factored(&mut self) {
        if !self.valid && !self.refactor() {
            log::debug!("basis singular, falling back to slack basis");
            self.slack_basis();
        }
    }

    fn compute_primal(&mut self, lo: &[f64], hi: &[f64]) {
        let m = self.m();
        let ncols = self.ncols;
        let mut r = vec![0.0; m];
        for j in 0..ncols + m {
            if self.pos[j] != NONBASIC {
                continue;
            }
            let v = self.nonbasic_value(j, lo, hi);
            if v == 0.0 {
                continue;
            }
            if j < ncols {
                for &(i, a) in &self.columns[j] {
                    r[i] -= a * v;
                }
            } else {
                r[j - ncols] += v;
            }
        }
        for k in 0..m {
            let row = &self.binv[k * m..(k + 1) * m];
            self.xb[k] = row.iter().zip(&r).map(|(b, v)| b * v).sum();
        }
    }

    fn compute_duals(&self, cost: &[f64], d: &mut Vec<f64>) {
        let m = self.m();
        let ncols = self.ncols;
        let mut y = vec![0.0; m];
        for (k, &j) in self.head.iter().enumerate() {
            let c = if j < ncols { cost[j] } else { 0.0 };
            if c != 0.0 {
                for (yi, &b) in y.iter_mut().zip(&self.binv[k * m..(k + 1) * m]) {
                    *yi += c * b;
                }
            }
        }
        d.clear();
        d.resize(ncols + m, 0.0);
        for j in 0..ncols {
            if self.pos[j] == NONBASIC {
                d[j] = cost[j] - self.columns[j].iter().map(|&(i, a)| y[i] * a).sum::<f64>();
            }
        }
        for i in 0..m {
            if self.pos[ncols + i] == NONBASIC {
                d[ncols + i] = y[i];
            }
        }
    }

    /// Moves nonbasics to the bound their reduced cost asks for. Returns
    /// true when anything moved.
    fn make_dual_feasible(&mut self, d: &[f64], lo: &[f64], hi: &[f64]) -> bool {
        let mut changed = false;
        for j in 0..d.len() {
            if self.pos[j] != NONBASIC {
                continue;
            }
            let (l, u) = self.bounds(j, lo, hi);
            let want_upper = if l == u {
                false
            } else if d[j] < -DUAL_TOL {
                true
            } else if d[j] > DUAL_TOL {
                false
            } else {
                self.at_upper[j]
            };
            if want_upper != self.at_upper[j] {
                self.at_upper[j] = want_upper;
                changed = true;
            }
        }
        changed
    }

    fn choose_leaving(&self, lo: &[f64], hi: &[f64], bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (k, &j) in self.head.iter().enumerate() {
            let (l, u) = self.bounds(j, lo, hi);
            let inf = infeasibility(self.xb[k], l, u);
            if inf <= 0.0 {
                continue;
            }
            let better = match best {
                None => true,
                Some((bk, binf)) => {
                    if bland {
                        j < self.head[bk]
                    } else {
                        inf > binf
                    }
                }
            };
            if better {
                best = Some((k, inf));
            }
        }
        best.map(|(k, _)| k)
    }

    pub fn structural_values(&self, lo: &[f64], hi: &[f64], _rows: &[Row], ncols: usize) -> Vec<f64> {
        (0..ncols)
            .map(|j| {
                if self.pos[j] != NONBASIC {
                    self.xb[self.pos[j]]
                } else {
                    self.nonbasic_value(j, lo, hi)
                }
            })
            .collect()
    }

    pub fn run(&mut self, cost: &[f64], lo: &[f64], hi: &[f64], rows: &[Row], cap: usize) -> Outcome {
        let m = self.m();
        if m == 0 {
            for j in 0..self.ncols {
                self.at_upper[j] = cost[j] < 0.0 && lo[j] < hi[j];
            }
            return Outcome {
                status: LpStatus::Optimal,
                iterations: 0,
            };
        }
        let refactor_interval = MIN_REFACTOR_INTERVAL.max(m / 2);
        if self.pivots >= refactor_interval {
            self.valid = false;
        }
        self.ensure_factored();
        let ncols = self.ncols;
        let nv = ncols + m;
        let mut d = Vec::with_capacity(nv);
        self.compute_duals(cost, &mut d);
        let mut iterations = 0;
        let mut degenerate_run = 0;
        let mut fresh = true;
        let mut alpha = vec![0.0; nv];
        let mut u = vec![0.0; m];

        'outer: loop {
            self.make_dual_feasible(&d, lo, hi);
            self.compute_primal(lo, hi);
            loop {
                let bland = degenerate_run >= DEGENERATE_SWITCH;
                let Some(r) = self.choose_leaving(lo, hi, bland) else {
                    break;
                };
                if iterations >= cap {
                    return Outcome {
                        status: LpStatus::IterationLimit,
                        iterations,
                    };
                }
                let leaving = self.head[r];
                let (lr, ur) = self.bounds(leaving, lo, hi);
                let s = if self.xb[r] > ur { 1.0 } else { -1.0 };

                // Pivot row alpha_j = (e_r^T B^-1) a_j.
                let rho = &self.binv[r * m..(r + 1) * m];
                alpha[..ncols].iter_mut().for_each(|a| *a = 0.0);
                for (i, &p) in rho.iter().enumerate() {
                    if p != 0.0 {
                        for &(j, a) in &rows[i].spec.coefs {
                            alpha[j] += p * a;
                        }
                    }
                    alpha[ncols + i] = -p;
                }

                // Harris two-pass ratio test over the eligible nonbasics.
                let eligible = |j: usize, this: &Self| -> Option<f64> {
                    if this.pos[j] != NONBASIC {
                        return None;
                    }
                    let (l, u) = this.bounds(j, lo, hi);
                    if l == u {
                        return None;
                    }
                    let a = alpha[j];
                    if a.abs() < PIVOT_TOL {
                        return None;
                    }
                    let sa = s * a;
                    if (!this.at_upper[j] && sa > 0.0) || (this.at_upper[j] && sa < 0.0) {
                        let dj = if this.at_upper[j] { -d[j] } else { d[j] };
                        Some(dj.max(0.0))
                    } else {
                        None
                    }
                };
                let mut entering: Option<usize> = None;
                if bland {
                    let mut best = f64::INFINITY;
                    for j in 0..nv {
                        if let Some(dj) = eligible(j, self) {
                            let ratio = dj / alpha[j].abs();
                            if ratio < best - 1e-12 {
                                best = ratio;
                                entering = Some(j);
                            }
                        }
                    }
                } else {
                    let mut bound = f64::INFINITY;
                    for j in 0..nv {
                        if let Some(dj) = eligible(j, self) {
                            bound = bound.min((dj + DUAL_TOL) / alpha[j].abs());
                        }
                    }
                    let mut best_abs = 0.0;
                    for j in 0..nv {
                        if let Some(dj) = eligible(j, self) {
                            let a = alpha[j].abs();
                            if dj / a <= bound && a > best_abs {
                                best_abs = a;
                                entering = Some(j);
                            }
                        }
                    }
                }
                let Some(q) = entering else {
                    if !fresh {
                        self.valid = false;
                        self.ensure_factored();
                        self.compute_duals(cost, &mut d);
                        fresh = true;
                        continue 'outer;
                    }
                    return Outcome {
                        status: LpStatus::Infeasible,
                        iterations,
                    };
                };

                // Column u = B^-1 a_q.
                if q < ncols {
                    u.iter_mut().for_each(|v| *v = 0.0);
                    for &(i, a) in &self.columns[q] {
                        for k in 0..m {
                            u[k] += self.binv[k * m + i] * a;
                        }
                    }
                } else {
                    let i = q - ncols;
                    for k in 0..m {
                        u[k] = -self.binv[k * m + i];
                    }
                }
                let piv = u[r];
                if (piv - alpha[q]).abs() > 1e-7 * (1.0 + piv.abs()) || piv.abs() < PIVOT_TOL {
                    if fresh {
                        // The inverse was rebuilt and the row and column
                        // still disagree; the basis is too ill-conditioned.
                        self.slack_basis();
                    } else {
                        self.valid = false;
                        self.ensure_factored();
                    }
                    self.compute_duals(cost, &mut d);
                    fresh = true;
                    continue 'outer;
                }

                let dq = if self.at_upper[q] { -d[q] } else { d[q] };
                let theta = s * dq.max(0.0) / alpha[q].abs();
                if theta.abs() < 1e-12 {
                    degenerate_run += 1;
                } else {
                    degenerate_run = 0;
                }
                for j in 0..nv {
                    if self.pos[j] == NONBASIC && alpha[j] != 0.0 {
                        d[j] -= theta * alpha[j];
                    }
                }
                d[q] = 0.0;
                d[leaving] = -theta;

                let target = if s > 0.0 { ur } else { lr };
                let step = (self.xb[r] - target) / piv;
                let xq = self.nonbasic_value(q, lo, hi) + step;
                for k in 0..m {
                    self.xb[k] -= u[k] * step;
                }
                self.xb[r] = xq;

                // Rank-one update of the inverse.
                for c in 0..m {
                    self.binv[r * m + c] /= piv;
                }
                let pivot_row = self.binv[r * m..(r + 1) * m].to_vec();
                for k in 0..m {
                    let f = u[k];
                    if k == r || f == 0.0 {
                        continue;
                    }
                    let row = &mut self.binv[k * m..(k + 1) * m];
                    for (b, &p) in row.iter_mut().zip(&pivot_row) {
                        *b -= f * p;
                    }
                }

                self.at_upper[leaving] = s > 0.0;
                self.pos[leaving] = NONBASIC;
                self.pos[q] = r;
                self.head[r] = q;
                self.at_upper[q] = false;
                iterations += 1;
                self.pivots += 1;
                fresh = false;

                if self.pivots >= refactor_interval {
                    self.valid = false;
                    self.ensure_factored();
                    self.compute_duals(cost, &mut d);
                    fresh = true;
                    continue 'outer;
                }
            }

            // No primal infeasibility left: confirm with fresh values.
            self.compute_duals(cost, &mut d);
            let dual_ok = (0..nv).all(|j| {
                if self.pos[j] != NONBASIC {
                    return true;
                }
                let (l, u) = self.bounds(j, lo, hi);
                l == u
                    || (self.at_upper[j] && d[j] <= DUAL_TOL * 10.0)
                    || (!self.at_upper[j] && d[j] >= -DUAL_TOL * 10.0)
            });
            if !dual_ok {
                continue 'outer;
            }
            self.compute_primal(lo, hi);
            let primal_ok = self.head.iter().enumerate().all(|(k, &j)| {
                let (l, u) = self.bounds(j, lo, hi);
                infeasibility(self.xb[k], l, u) == 0.0
            });
            if primal_ok {
                return Outcome {
                    status: LpStatus::Optimal,
                    iterations,
                };
            }
        }
    }
}
