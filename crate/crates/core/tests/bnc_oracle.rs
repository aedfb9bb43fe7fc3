use hgmst::bnc::{solve, SolveStatus, SolverConfig};
use hgmst::harness::random_instance;
use hgmst::oracle::{brute_force_mst, is_spanning_tree};

#[test]
fn matches_brute_force_on_small_instances() {
    for seed in 0..200u64 {
        let n = 3 + (seed % 7) as usize;
        let h = random_instance(n, 5 + (seed % 7) as usize, seed % 3 == 0, seed).unwrap();
        assert!(h.num_edges() <= 20);
        let want = brute_force_mst(&h).unwrap();
        let got = solve(&h, &SolverConfig { seed, ..SolverConfig::default() }).unwrap();
        assert_eq!(got.status, SolveStatus::Optimal, "seed {seed}");
        let tree = got.tree.unwrap();
        assert!(is_spanning_tree(&h, &tree), "seed {seed}");
        assert!((got.objective - want.weight).abs() <= 1e-9, "seed {seed}: {} vs {}", got.objective, want.weight);
    }
}

#[test]
fn integrality_delta_never_hurts() {
    for seed in 0..50u64 {
        let h = random_instance(8, 14, true, 1000 + seed).unwrap();
        let on = solve(&h, &SolverConfig { integrality_delta: true, ..SolverConfig::default() }).unwrap();
        let off = solve(&h, &SolverConfig { integrality_delta: false, ..SolverConfig::default() }).unwrap();
        assert_eq!(on.objective, off.objective, "seed {seed}");
        assert!(on.stats.nodes_processed <= off.stats.nodes_processed, "seed {seed}");
    }
}
