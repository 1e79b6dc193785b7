mod oracles;

use std::collections::BTreeMap;

use normnet_core::community::{louvain, modularity};
use normnet_core::{PageId, Snapshot};
use oracles::{brute_force_modularity, planted_graphs, random_digraph, set_partitions, structureless_graphs};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn recomputed(s: &Snapshot, seed: u64) -> (f64, f64) {
    let p = louvain(s, seed);
    (p.modularity, modularity(s, &p.assignment_map()).unwrap())
}

#[test]
fn set_partition_enumeration_counts_bell_numbers() {
    let bell = [1, 1, 2, 5, 15, 52, 203, 877, 4140];
    for (n, &b) in bell.iter().enumerate() {
        assert_eq!(set_partitions(n).len(), b);
    }
}

#[test]
fn planted_graphs_reach_brute_force_optimum() {
    for (name, s) in planted_graphs() {
        let best = brute_force_modularity(&s);
        for seed in 0..10 {
            let (q, again) = recomputed(&s, seed);
            assert!((q - again).abs() < 1e-12, "{name}: reported {q} recomputed {again}");
            assert!((q - best).abs() < 1e-12, "{name} seed {seed}: {q} vs optimum {best}");
        }
    }
}

#[test]
fn structureless_graphs_stay_within_bounds() {
    for (name, s) in structureless_graphs() {
        let best = brute_force_modularity(&s);
        let mut hits = 0;
        for seed in 0..10 {
            let (q, again) = recomputed(&s, seed);
            assert!((q - again).abs() < 1e-12, "{name}");
            assert!(q <= best + 1e-12 && q >= -1e-12, "{name}");
            hits += usize::from((q - best).abs() < 1e-12);
        }
        println!("{name}: optimum on {hits}/10 seeds");
    }
}

#[test]
fn random_graphs_bounds_and_optimum_rate() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut hits, mut runs) = (0, 0);
    for _ in 0..150 {
        let n = rng.random_range(1..=8);
        let p = rng.random_range(0.1..0.6);
        let s = random_digraph(&mut rng, n, p);
        let best = brute_force_modularity(&s);
        let singletons: BTreeMap<PageId, usize> = s.nodes().iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let together: BTreeMap<PageId, usize> = s.nodes().iter().map(|&id| (id, 0)).collect();
        let floor = modularity(&s, &singletons).unwrap().max(modularity(&s, &together).unwrap());
        for seed in 0..2 {
            let (q, again) = recomputed(&s, seed);
            assert!((q - again).abs() < 1e-12);
            assert!(q >= floor - 1e-12 && q <= best + 1e-12);
            assert!((-0.5..=1.0).contains(&q));
            runs += 1;
            hits += usize::from((q - best).abs() < 1e-12);
        }
    }
    // greedy Louvain is not exact; it reaches the optimum on most small graphs
    let rate = hits as f64 / runs as f64;
    println!("louvain optimum rate on random graphs: {hits}/{runs}");
    assert!(rate >= 0.9, "{rate}");
}
