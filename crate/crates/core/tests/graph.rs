mod common;

use colorsym::graph::{families, parse_dimacs_col, Graph};
use common::{bench, figure1, max_clique};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn benchmark_sizes() {
    for (name, n, m) in [("myciel3", 11, 20), ("myciel4", 23, 71), ("myciel5", 47, 236), ("queen5_5", 25, 160), ("queen6_6", 36, 290)] {
        let g = bench(name);
        assert_eq!((g.num_vertices(), g.num_edges()), (n, m), "{name}");
    }
}

#[test]
fn bundled_generators_match_files() {
    assert_eq!(bench("myciel3").edges(), families::myciel(3).edges());
    assert_eq!(bench("myciel4").edges(), families::myciel(4).edges());
    assert_eq!(bench("queen5_5").edges(), families::queen(5, 5).edges());
}

#[test]
fn degrees() {
    assert_eq!(figure1().degree(3).unwrap(), 3);
    assert_eq!(families::empty(2).degree(1).unwrap(), 0);
    assert!((1..=4).all(|v| families::complete(4).degree(v).unwrap() == 3));
    assert!(figure1().degree(5).is_err());
}

#[test]
fn chromatic_oracle() {
    assert_eq!(families::cycle(5).brute_force_chromatic(10).unwrap(), 3);
    assert_eq!(families::petersen().brute_force_chromatic(10).unwrap(), 3);
    assert_eq!(bench("myciel3").brute_force_chromatic(11).unwrap(), 4);
    assert!(bench("myciel4").brute_force_chromatic(10).is_err());
}

#[test]
fn parse_edge_cases() {
    assert_eq!(parse_dimacs_col("p edge 1 0\n").unwrap().num_vertices(), 1);
    let g = parse_dimacs_col("c dup\np edge 2 2\ne 1 2\ne 2 1\n").unwrap();
    assert_eq!(g.num_edges(), 1);
    assert!(parse_dimacs_col("p edge 2 1\ne 1 1\n").is_err());
    assert!(parse_dimacs_col("p edge 2 1\ne 1 3\n").is_err());
}

fn random_graph(n: usize, seed: u64) -> Graph {
    families::gnp(n, 0.5, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #[test]
    fn serialize_round_trip(n in 1usize..30, seed in any::<u64>()) {
        let g = random_graph(n, seed);
        let text = g.to_dimacs_col();
        let h = parse_dimacs_col(&text).unwrap();
        prop_assert_eq!(&h, &g);
        prop_assert_eq!(h.to_dimacs_col(), text);
    }

    #[test]
    fn degree_sum_is_twice_edges(n in 1usize..30, seed in any::<u64>()) {
        let g = random_graph(n, seed);
        let sum: usize = (1..=n).map(|v| g.degree(v).unwrap()).sum();
        prop_assert_eq!(sum, 2 * g.num_edges());
        for v in 0..n {
            for &u in g.neighbors(v) {
                prop_assert!(g.neighbors(u as usize).contains(&(v as u32)));
            }
        }
    }

    #[test]
    fn clique_bounds_chromatic(n in 1usize..=10, seed in any::<u64>()) {
        let g = random_graph(n, seed);
        prop_assert!(max_clique(&g) <= g.brute_force_chromatic(10).unwrap());
    }
}
