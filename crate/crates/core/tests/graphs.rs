mod common;

use cliquelab::graphs::{
    all_graphs, encode_node, enumerate_k_cliques, gen_planted_3k_clique, gen_random_gnp, has_3k_clique, parse_graph,
    Graph,
};
use proptest::prelude::*;

#[test]
fn spec_examples() {
    let k3 = parse_graph("n=3; 1-2 2-3 1-3").unwrap();
    assert_eq!(k3, Graph::complete(3));
    let p3 = parse_graph("n=3; 1-2 2-3").unwrap();
    assert_eq!(p3.edge_count(), 2);
    assert!(parse_graph("n=3; 2-2").is_err());
    assert!(parse_graph("n=3; 1-2 2-1").is_err());
    assert!(parse_graph("n=3; 0-1").is_err());
    assert!(parse_graph("n=3; 1-4").is_err());

    assert_eq!(enumerate_k_cliques(&Graph::complete(4), 2).len(), 6);
    let singles: Vec<Vec<usize>> = enumerate_k_cliques(&k3, 1).iter().map(|c| c.nodes().to_vec()).collect();
    assert_eq!(singles, [[1], [2], [3]]);
    assert!(enumerate_k_cliques(&p3, 3).is_empty());
    assert!(enumerate_k_cliques(&p3, 4).is_empty());

    assert!(has_3k_clique(&k3, 1));
    assert!(!has_3k_clique(&p3, 1));
    let mut k6 = Graph::complete(6);
    k6 = Graph::from_edges(6, &k6.edges().into_iter().filter(|&e| e != (2, 5)).collect::<Vec<_>>()).unwrap();
    assert!(!has_3k_clique(&k6, 2));
    assert_eq!(has_3k_clique(&k6, 2), common::brute_clique(&k6, 6));

    let e = encode_node(3, 3).unwrap();
    assert_eq!(e.bits(), [0, 0, 1, 1]);
    assert_eq!(encode_node(1, 1).unwrap().bits(), [0, 1]);
    assert!(encode_node(5, 4).is_err());
    assert!(encode_node(0, 4).is_err());
}

#[test]
fn exhaustive_small_graphs_match_bitmask_oracle() {
    for n in 1..=5 {
        let graphs = all_graphs(n);
        assert_eq!(graphs.len(), 1 << (n * (n - 1) / 2));
        for g in &graphs {
            for k in 1..=n {
                let got: Vec<Vec<usize>> = enumerate_k_cliques(g, k).iter().map(|c| c.nodes().to_vec()).collect();
                assert_eq!(got, common::clique_sets(g, k));
            }
            assert_eq!(has_3k_clique(g, 1), common::brute_clique(g, 3));
        }
    }
}

#[test]
fn planted_graphs_contain_the_clique() {
    for seed in 0..20 {
        for (n, k) in [(6, 2), (7, 2), (5, 1)] {
            let g = gen_planted_3k_clique(n, 0.3, k, seed);
            assert!(has_3k_clique(&g, k));
            assert!(common::brute_clique(&g, 3 * k));
        }
    }
}

proptest! {
    #[test]
    fn encodings_are_distinct_and_fixed_width(n in 1usize..200) {
        let w = common::width(n);
        let mut seen = std::collections::HashSet::new();
        for v in 1..=n {
            let e = encode_node(v, n).unwrap();
            prop_assert_eq!(e.width(), w);
            prop_assert!(e.bits().iter().any(|&b| b == 1));
            let value = e.bits().iter().fold(0usize, |acc, &b| 2 * acc + b as usize);
            prop_assert_eq!(value, v);
            prop_assert!(seen.insert(e.bits().to_vec()));
        }
    }

    #[test]
    fn gnp_is_seed_deterministic(n in 1usize..12, p in 0.0f64..1.0, seed: u64) {
        let a = gen_random_gnp(n, p, seed);
        prop_assert_eq!(&a, &gen_random_gnp(n, p, seed));
        prop_assert_eq!(parse_graph(&a.to_text()).unwrap(), a.clone());
        prop_assert_eq!(a.digest(), gen_random_gnp(n, p, seed).digest());
    }

    #[test]
    fn cliques_are_sorted_and_valid(n in 1usize..9, p in 0.0f64..1.0, seed: u64, k in 1usize..5) {
        let g = gen_random_gnp(n, p, seed);
        let cliques = enumerate_k_cliques(&g, k);
        for c in &cliques {
            prop_assert_eq!(c.nodes().len(), k);
            prop_assert!(c.nodes().windows(2).all(|w| w[0] < w[1]));
        }
        prop_assert!(cliques.windows(2).all(|w| w[0].nodes() < w[1].nodes()));
        prop_assert_eq!(cliques.len(), common::clique_sets(&g, k).len());
    }
}
