use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use serde::Serialize;

use hgmst::bnc::{solve, SolveStats, SolveStatus, SolverConfig};
use hgmst::harness::{
    generate_instance, parse_instance_labeled, run_experiment, write_instance_file, GeneratorParams,
};
use hgmst::oracle::{brute_force_mst, BRUTE_FORCE_MAX_EDGES};
use hgmst::pool::ExperimentMode;
use hgmst::Error;

#[derive(Parser)]
#[command(name = "hgmst", version, about = "Minimum spanning trees in hypergraphs by branch and cut")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file.
    Solve {
        file: PathBuf,
        #[arg(long, default_value = "both")]
        mode: ExperimentMode,
        /// Wall-clock limit in seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long)]
        node_limit: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Add the complement of every subtour found.
        #[arg(long)]
        complementary: bool,
        /// Use the tighter cutoff for integer weights.
        #[arg(long)]
        integrality_delta: bool,
        /// Stop once the root relaxation has converged.
        #[arg(long)]
        root_only: bool,
        /// Print the result as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Write a random geometric instance.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Hyperedge clusters sampled per vertex.
        #[arg(long, default_value_t = 1.0)]
        clusters: f64,
    },
    /// Compare subtour generation modes on generated instances.
    Experiment {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, value_delimiter = ',', default_value = "both,large,small")]
        modes: Vec<ExperimentMode>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
        /// Hyperedge clusters sampled per vertex.
        #[arg(long, default_value_t = 1.0)]
        clusters: f64,
    },
    /// Check the solver against exhaustive search on a small instance.
    Verify { file: PathBuf },
}

#[derive(Serialize)]
struct SolveReport<'a> {
    status: SolveStatus,
    objective: Option<f64>,
    tree: Option<&'a [usize]>,
    /// Tree edges as lists of the file's vertex labels.
    edges: Option<Vec<Vec<&'a str>>>,
    stats: &'a SolveStats,
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::InvalidHypergraph(_) | Error::InvalidArgument(_) | Error::Io(_) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Solve {
            file,
            mode,
            time_limit,
            node_limit,
            seed,
            complementary,
            integrality_delta,
            root_only,
            json,
        } => {
            let inst = parse_instance_labeled(&std::fs::read_to_string(&file)?)?;
            let config = SolverConfig {
                time_limit: time_limit.map(Duration::from_secs_f64),
                node_limit,
                mode,
                complementary,
                integrality_delta,
                seed,
                root_only,
                ..SolverConfig::default()
            };
            let out = solve(&inst.hypergraph, &config)?;
            let h = &inst.hypergraph;
            let edges = out.tree.as_ref().map(|t| {
                t.iter()
                    .map(|&e| h.edge(e).iter().map(|&v| inst.labels[v].as_str()).collect())
                    .collect()
            });
            let report = SolveReport {
                status: out.status,
                objective: out.objective.is_finite().then_some(out.objective),
                tree: out.tree.as_deref(),
                edges,
                stats: &out.stats,
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("status: {:?}", report.status);
                match report.objective {
                    Some(z) => println!("objective: {z}"),
                    None => println!("objective: none"),
                }
                if let Some(edges) = &report.edges {
                    for e in edges {
                        println!("edge: {}", e.join(" "));
                    }
                }
                let s = &out.stats;
                println!(
                    "root iterations: {}, nodes: {}, gap ppm: {}, root fractional: {}",
                    s.root_iterations, s.nodes_processed, s.gap_ppm, s.root_fractional
                );
            }
            Ok(match out.status {
                SolveStatus::Optimal | SolveStatus::RootOnly => 0,
                SolveStatus::TimeLimit | SolveStatus::NodeLimit => 1,
            })
        }
        Command::Generate { n, seed, out, clusters } => {
            let params = GeneratorParams {
                clusters_per_vertex: clusters,
                ..GeneratorParams::default()
            };
            let h = generate_instance(seed, n, &params)?;
            write_instance_file(&out, &h)?;
            Ok(0)
        }
        Command::Experiment {
            n,
            count,
            modes,
            seed,
            out_dir,
            clusters,
        } => {
            let params = GeneratorParams {
                clusters_per_vertex: clusters,
                ..GeneratorParams::default()
            };
            let instances = (0..count as u64)
                .map(|i| Ok((format!("n{n}-s{}", seed + i), generate_instance(seed + i, n, &params)?)))
                .collect::<Result<Vec<_>, Error>>()?;
            let records = run_experiment(&instances, &modes, &SolverConfig::default(), Some(&out_dir))?;
            for mode in &modes {
                let runs: Vec<_> = records.iter().filter(|r| r.mode == *mode).collect();
                let mean = runs.iter().map(|r| r.iterations as f64).sum::<f64>() / runs.len().max(1) as f64;
                println!("{mode}: mean iterations {mean:.2} over {} runs", runs.len());
            }
            Ok(0)
        }
        Command::Verify { file } => {
            let h = parse_instance_labeled(&std::fs::read_to_string(&file)?)?.hypergraph;
            if h.num_edges() > BRUTE_FORCE_MAX_EDGES {
                return Err(Error::InvalidArgument(format!(
                    "verify handles at most {BRUTE_FORCE_MAX_EDGES} edges"
                )));
            }
            let want = brute_force_mst(&h)?;
            let got = solve(&h, &SolverConfig::default())?;
            if (got.objective - want.weight).abs() <= 1e-9 {
                println!("OK {}", got.objective);
                Ok(0)
            } else {
                println!("MISMATCH solver {} oracle {}", got.objective, want.weight);
                Ok(1)
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
