mod common;

use approx::assert_abs_diff_eq;
use common::oracles::{all_partitions, modularity_oracle, random_case};
use gridevo::community::{modularity_detect, modularity_of};
use gridevo::Graph;

fn two_cliques() -> Graph {
    let clique = |o: usize| (0..4).flat_map(move |a| (a + 1..4).map(move |b| (a + o, b + o)));
    Graph::from_edges(8, clique(0).chain(clique(4)).chain([(3, 4)]))
}

#[test]
fn bell_number_of_eight() {
    assert_eq!(all_partitions(8).len(), 4140);
}

#[test]
fn planted_partition_is_the_exhaustive_optimum() {
    let g = two_cliques();
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for p in all_partitions(8) {
        let q = modularity_oracle(&g, &p, 1.0);
        assert_abs_diff_eq!(modularity_of(&g, &p, 1.0).unwrap(), q, epsilon = 1e-12);
        if q > best.0 + 1e-12 {
            best = (q, p);
        }
    }
    assert_eq!(best.1, vec![0, 0, 0, 0, 1, 1, 1, 1]);
    assert_abs_diff_eq!(best.0, 12.0 / 13.0 - 0.5, epsilon = 1e-12);
    let found = modularity_detect(&g, 1.0, 42).unwrap();
    assert_abs_diff_eq!(found.modularity, best.0, epsilon = 1e-12);
}

#[test]
fn detected_modularity_is_reproducible_and_consistent() {
    for seed in 0..40u64 {
        let g = random_case(4, 40, seed);
        if g.edge_count() == 0 {
            continue;
        }
        for gamma in [0.5, 1.0, 2.0] {
            let p = modularity_detect(&g, gamma, seed).unwrap();
            assert_abs_diff_eq!(
                p.modularity,
                modularity_oracle(&g, &p.assignment, gamma),
                epsilon = 1e-12
            );
            assert_eq!(p, modularity_detect(&g, gamma, seed).unwrap());
            // never worse than leaving every node alone
            let singletons: Vec<usize> = (0..g.node_count()).collect();
            assert!(p.modularity >= modularity_oracle(&g, &singletons, gamma) - 1e-12);
        }
    }
}

#[test]
fn small_graphs_reach_near_exhaustive_optimum() {
    for seed in 0..15u64 {
        let g = random_case(5, 8, seed + 500);
        if g.edge_count() == 0 {
            continue;
        }
        let optimum = all_partitions(g.node_count())
            .iter()
            .map(|p| modularity_oracle(&g, p, 1.0))
            .fold(f64::NEG_INFINITY, f64::max);
        let found = modularity_detect(&g, 1.0, seed).unwrap().modularity;
        assert!(found <= optimum + 1e-12);
        assert!(found >= optimum - 0.1, "seed {seed}: {found} vs {optimum}");
    }
}
