//! Root-relaxation experiments comparing the subtour generation modes.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::bnc::{solve, SolverConfig};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::pool::ExperimentMode;

pub const ITERATIONS_CSV: &str = "iterations.csv";
pub const HISTOGRAM_CSV: &str = "histogram.csv";

/// One root-relaxation run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub instance: String,
    pub mode: ExperimentMode,
    /// Optimize/separate iterations until no subtour was violated.
    pub iterations: usize,
    pub nodes: usize,
    /// Root LP bound after convergence.
    pub objective: f64,
    pub gap_ppm: f64,
    pub time_ms: f64,
    /// Distinct subtours that entered the LP, by cardinality.
    pub histogram: BTreeMap<usize, usize>,
}

#[derive(Serialize)]
struct IterationRow<'a> {
    instance: &'a str,
    mode: ExperimentMode,
    iterations: usize,
    time_ms: u64,
}

#[derive(Serialize)]
struct HistogramRow<'a> {
    instance: &'a str,
    mode: ExperimentMode,
    k: usize,
    count: usize,
}

/// Solves the root relaxation of `h` in `mode`.
pub fn run_root(name: &str, h: &Hypergraph, mode: ExperimentMode, base: &SolverConfig) -> Result<ExperimentRecord> {
    let config = SolverConfig {
        mode,
        root_only: true,
        ..base.clone()
    };
    let out = solve(h, &config)?;
    Ok(ExperimentRecord {
        instance: name.to_string(),
        mode,
        iterations: out.stats.root_iterations,
        nodes: out.stats.nodes_processed,
        objective: out.stats.root_bound,
        gap_ppm: out.stats.gap_ppm,
        time_ms: out.stats.total_ms,
        histogram: out.stats.histogram,
    })
}

/// Runs every instance in every mode and, when `out_dir` is given, writes
/// `iterations.csv` and `histogram.csv` there.
pub fn run_experiment(
    instances: &[(String, Hypergraph)],
    modes: &[ExperimentMode],
    base: &SolverConfig,
    out_dir: Option<&Path>,
) -> Result<Vec<ExperimentRecord>> {
    let mut records = Vec::with_capacity(instances.len() * modes.len());
    for (name, h) in instances {
        for &mode in modes {
            let r = run_root(name, h, mode, base)?;
            log::info!("{name} {mode}: {} iterations, {:.1} ms", r.iterations, r.time_ms);
            records.push(r);
        }
    }
    if let Some(dir) = out_dir {
        write_csvs(&records, dir)?;
    }
    Ok(records)
}

pub fn write_csvs(records: &[ExperimentRecord], dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut it = csv::Writer::from_path(dir.join(ITERATIONS_CSV))?;
    let mut hist = csv::Writer::from_path(dir.join(HISTOGRAM_CSV))?;
    for r in records {
        it.serialize(IterationRow {
            instance: &r.instance,
            mode: r.mode,
            iterations: r.iterations,
            time_ms: r.time_ms.round() as u64,
        })?;
        for (&k, &count) in &r.histogram {
            hist.serialize(HistogramRow {
                instance: &r.instance,
                mode: r.mode,
                k,
                count,
            })?;
        }
    }
    it.flush().map_err(Error::from)?;
    hist.flush().map_err(Error::from)?;
    Ok(())
}

/// Mean number of distinct subtours with at most `max_k` vertices per run.
pub fn mean_small_mass(records: &[ExperimentRecord], mode: ExperimentMode, max_k: usize) -> f64 {
    let runs: Vec<&ExperimentRecord> = records.iter().filter(|r| r.mode == mode).collect();
    if runs.is_empty() {
        return 0.0;
    }
    let total: usize = runs
        .iter()
        .map(|r| r.histogram.range(..=max_k).map(|(_, c)| c).sum::<usize>())
        .sum();
    total as f64 / runs.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gadget_root_run() {
        let h = Hypergraph::new(
            3,
            vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![0, 1, 2]],
            vec![1.0, 1.0, 1.0, 1.9],
        )
        .unwrap();
        let r = run_root("gadget", &h, ExperimentMode::Both, &SolverConfig::default()).unwrap();
        assert!((1..=2).contains(&r.iterations));
        assert!((r.objective - 1.9).abs() < 1e-9);
        assert!(r.histogram.contains_key(&2));
    }
}
