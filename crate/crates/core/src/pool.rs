//! Constraint pool: deduplicated storage of every subtour found so far, the
//! SOS scan that decides which violated pool rows enter the LP, the nonzero
//! budget, and the cardinality filters of the experiment modes.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::hypergraph::{Hypergraph, VIOLATION_TOL};
use crate::lp::RowSpec;
use crate::subtour::{CanonicalKey, SubtourConstraint};

/// Default number of strata built by one SOS scan.
pub const SOS_STRATA: usize = 8;

/// Subtour generation regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentMode {
    #[default]
    Both,
    Large,
    Small,
}

impl ExperimentMode {
    pub const ALL: [ExperimentMode; 3] = [Self::Both, Self::Large, Self::Small];
}

impl fmt::Display for ExperimentMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Both => "both",
            Self::Large => "large",
            Self::Small => "small",
        })
    }
}

impl FromStr for ExperimentMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "both" => Ok(Self::Both),
            "large" => Ok(Self::Large),
            "small" => Ok(Self::Small),
            other => Err(Error::InvalidArgument(format!("unknown mode '{other}'"))),
        }
    }
}

fn round_share(share: f64, n: usize) -> usize {
    (share * n as f64 + 0.5).floor() as usize
}

/// Primary cardinality cutoff shared by both filtered modes.
pub fn primary_cutoff(n: usize) -> usize {
    round_share(0.342, n)
}

/// Fallback cutoff for small mode: `|S| <= floor(0.597 n + 0.5)`.
pub fn small_fallback_cutoff(n: usize) -> usize {
    round_share(0.597, n)
}

/// Fallback cutoff for large mode: `|S| > floor(0.146 n + 0.5)`.
pub fn large_fallback_cutoff(n: usize) -> usize {
    round_share(0.146, n)
}

/// Keeps the subtours a mode wants to see. `size` gives `|S|`, `key` the
/// tie-breaking order used when a single item is picked.
pub fn mode_filter<T, S, K>(items: Vec<T>, mode: ExperimentMode, n: usize, size: S, key: K) -> Vec<T>
where
    S: Fn(&T) -> usize,
    K: Fn(&T) -> u64,
{
    if items.is_empty() || mode == ExperimentMode::Both {
        return items;
    }
    let (first, second): (Box<dyn Fn(usize) -> bool>, Box<dyn Fn(usize) -> bool>) = match mode {
        ExperimentMode::Small => {
            let (a, b) = (primary_cutoff(n), small_fallback_cutoff(n));
            (Box::new(move |k| k <= a), Box::new(move |k| k <= b))
        }
        ExperimentMode::Large => {
            let (a, b) = (primary_cutoff(n), large_fallback_cutoff(n));
            (Box::new(move |k| k > a), Box::new(move |k| k > b))
        }
        ExperimentMode::Both => unreachable!(),
    };
    if items.iter().any(|t| first(size(t))) {
        return items.into_iter().filter(|t| first(size(t))).collect();
    }
    if items.iter().any(|t| second(size(t))) {
        return items.into_iter().filter(|t| second(size(t))).collect();
    }
    let pick = items
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            let by_size = size(a).cmp(&size(b));
            let by_size = if mode == ExperimentMode::Large {
                by_size.reverse()
            } else {
                by_size
            };
            by_size.then_with(|| key(a).cmp(&key(b)))
        })
        .map(|(i, _)| i)
        .unwrap();
    items.into_iter().nth(pick).into_iter().collect()
}

/// Sparse-orthogonal-stratified selection. `candidates` are
/// `(nonzeros, column support)` pairs already sorted from sparsest to
/// densest. Each of at most `k` passes greedily takes every remaining
/// candidate whose columns are disjoint from those already taken in that
/// pass. Returns candidate indices grouped by stratum.
pub fn sos_strata(candidates: &[(usize, Vec<usize>)], k: usize) -> Vec<Vec<usize>> {
    let mut remaining: Vec<usize> = (0..candidates.len()).collect();
    let ncols = candidates
        .iter()
        .flat_map(|(_, cols)| cols.iter())
        .max()
        .map_or(0, |&c| c + 1);
    let mut used = vec![usize::MAX; ncols];
    let mut strata = Vec::new();
    for pass in 0..k {
        if remaining.is_empty() {
            break;
        }
        let mut stratum = Vec::new();
        remaining.retain(|&i| {
            let cols = &candidates[i].1;
            if cols.iter().any(|&c| used[c] == pass) {
                return true;
            }
            for &c in cols {
                used[c] = pass;
            }
            stratum.push(i);
            false
        });
        strata.push(stratum);
    }
    strata
}

#[derive(Debug, Clone)]
pub struct PoolEntry {
    pub constraint: SubtourConstraint,
    pub row: RowSpec,
    /// How many times the row was added to an LP.
    pub times_added: usize,
    /// Scan counter value when the row was last seen violated.
    pub last_violated: u64,
}

#[derive(Debug, Clone)]
pub struct ConstraintPool {
    entries: BTreeMap<u64, PoolEntry>,
    budget: usize,
    total_nonzeros: usize,
    binding: HashSet<u64>,
    scans: u64,
    last_inserted: Option<u64>,
}

impl ConstraintPool {
    pub fn new(budget: usize) -> Self {
        Self {
            entries: BTreeMap::new(),
            budget,
            total_nonzeros: 0,
            binding: HashSet::new(),
            scans: 0,
            last_inserted: None,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn total_nonzeros(&self) -> usize {
        self.total_nonzeros
    }

    pub fn get(&self, key: u64) -> Option<&PoolEntry> {
        self.entries.get(&key)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&u64, &PoolEntry)> {
        self.entries.iter()
    }

    pub fn contains(&self, key: &CanonicalKey) -> bool {
        self.entries
            .get(&key.hash64())
            .is_some_and(|e| e.constraint.key() == key)
    }

    /// Replaces the binding set: keys of rows tight in some active node.
    pub fn set_binding<I: IntoIterator<Item = u64>>(&mut self, keys: I) {
        self.binding = keys.into_iter().collect();
    }

    pub fn is_binding(&self, key: u64) -> bool {
        self.binding.contains(&key)
    }

    /// Adds a constraint unless an equivalent one is stored. Makes room
    /// under the nonzero budget first.
    pub fn insert(&mut self, h: &Hypergraph, c: SubtourConstraint) -> (u64, bool) {
        let hash = c.key().hash64();
        if let Some(existing) = self.entries.get(&hash) {
            if existing.constraint.key() != c.key() {
                log::warn!("canonical key hash collision on {hash:#x}; constraint dropped");
            }
            return (hash, false);
        }
        self.enforce_size_limit(c.nonzeros());
        self.total_nonzeros += c.nonzeros();
        let row = c.row(h);
        self.entries.insert(
            hash,
            PoolEntry {
                constraint: c,
                row,
                times_added: 0,
                last_violated: self.scans,
            },
        );
        self.last_inserted = Some(hash);
        (hash, true)
    }

    /// Evicts non-binding entries, densest first, until `incoming` more
    /// nonzeros fit in the budget. Binding entries are never evicted, so the
    /// budget can be exceeded when they alone need the room.
    pub fn enforce_size_limit(&mut self, incoming: usize) -> Vec<u64> {
        if self.total_nonzeros + incoming <= self.budget {
            return Vec::new();
        }
        let mut candidates: Vec<(usize, u64)> = self
            .entries
            .iter()
            .filter(|(k, _)| !self.binding.contains(k))
            .map(|(&k, e)| (e.constraint.nonzeros(), k))
            .collect();
        candidates.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut evicted = Vec::new();
        for (nz, k) in candidates {
            if self.total_nonzeros + incoming <= self.budget {
                break;
            }
            self.entries.remove(&k);
            self.total_nonzeros -= nz;
            evicted.push(k);
        }
        evicted
    }

    /// Consistency check: the nonzero tally matches the entries, and the
    /// budget is exceeded only when everything older than the latest insert
    /// is binding.
    pub fn audit(&self) -> bool {
        let tally: usize = self.entries.values().map(|e| e.constraint.nonzeros()).sum();
        if tally != self.total_nonzeros {
            return false;
        }
        self.total_nonzeros <= self.budget
            || self
                .entries
                .keys()
                .all(|k| self.binding.contains(k) || Some(*k) == self.last_inserted)
    }

    /// Violated, non-binding pool rows chosen by the SOS heuristic, in
    /// stratum order.
    pub fn sos_scan(&mut self, x: &[f64], k: usize) -> Vec<u64> {
        self.sos_scan_filtered(x, k, ExperimentMode::Both, 0)
    }

    /// SOS scan over the violated rows that pass the cardinality filter of
    /// `mode` for a hypergraph on `n` vertices.
    pub fn sos_scan_filtered(&mut self, x: &[f64], k: usize, mode: ExperimentMode, n: usize) -> Vec<u64> {
        self.scans += 1;
        let stamp = self.scans;
        let mut violated: Vec<(usize, u64)> = Vec::new();
        for (&key, e) in self.entries.iter_mut() {
            if self.binding.contains(&key) {
                continue;
            }
            let act: f64 = e.row.coefs.iter().map(|&(j, a)| a * x[j]).sum();
            let amount = match e.row.relation {
                crate::lp::Relation::Le => act - e.row.rhs,
                crate::lp::Relation::Ge => e.row.rhs - act,
                crate::lp::Relation::Eq => (act - e.row.rhs).abs(),
            };
            if amount > VIOLATION_TOL {
                e.last_violated = stamp;
                violated.push((e.constraint.nonzeros(), key));
            }
        }
        // Key order first so the filter's single-pick fallback is stable.
        violated.sort_by_key(|&(_, key)| key);
        let entries = &self.entries;
        let mut violated = mode_filter(violated, mode, n, |&(_, key)| entries[&key].constraint.size(), |&(_, key)| key);
        violated.sort();
        let candidates: Vec<(usize, Vec<usize>)> = violated
            .iter()
            .map(|&(nz, key)| (nz, self.entries[&key].row.coefs.iter().map(|&(j, _)| j).collect()))
            .collect();
        sos_strata(&candidates, k)
            .into_iter()
            .flatten()
            .map(|i| violated[i].1)
            .collect()
    }

    pub fn mark_added(&mut self, key: u64) {
        if let Some(e) = self.entries.get_mut(&key) {
            e.times_added += 1;
        }
    }
}
