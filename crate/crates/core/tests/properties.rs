use std::collections::{BTreeMap, BTreeSet};

use keyclass::graph::{format_graph, parse_graph};
use keyclass::metrics::{summarize, ClassMetrics};
use keyclass::pg::compute_r;
use keyclass::ranking;
use keyclass::{potential_gain, CouplingGraph, CouplingKind, NodeId, PgConfig};
use proptest::prelude::*;

fn graph_strategy(max_nodes: usize) -> impl Strategy<Value = CouplingGraph> {
    (1..=max_nodes).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..=n * n).prop_map(move |edges| {
            let names: Vec<NodeId> = (0..n)
                .map(|i| NodeId::new(format!("n{i}")).unwrap())
                .collect();
            let edges = edges
                .into_iter()
                .map(|(a, b)| (names[a].clone(), names[b].clone()));
            CouplingGraph::build(CouplingKind::Aggregation, names.clone(), edges).unwrap()
        })
    })
}

fn edge_set(g: &CouplingGraph) -> BTreeSet<(String, String)> {
    g.edges()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

proptest! {
    #[test]
    fn recursion_matches_walk_enumeration(g in graph_strategy(6)) {
        let d_max = 6;
        let table = compute_r(&g, d_max).unwrap();
        let names: Vec<&str> = g.nodes().iter().map(|n| n.as_str()).collect();
        let p = |d: usize| -> Vec<f64> {
            names.iter().map(|n| g.count_paths(n, d).unwrap() as f64).collect()
        };
        for d in 1..=table.truncated_at() {
            let denom: f64 = p(d - 1).iter().sum();
            for (i, walks) in p(d).into_iter().enumerate() {
                prop_assert!((table.get(d, i) - walks / denom).abs() < 1e-9);
            }
        }
        for d in table.truncated_at() + 1..=d_max {
            prop_assert!(p(d).iter().all(|&w| w == 0.0));
        }
    }

    #[test]
    fn walk_count_recursion(g in graph_strategy(6), d in 1usize..6) {
        for n in g.nodes() {
            let i = g.index_of(n.as_str()).unwrap();
            let via_succ: u64 = g
                .successors(i)
                .iter()
                .map(|&y| g.count_paths(g.node(y).as_str(), d - 1).unwrap())
                .sum();
            prop_assert_eq!(g.count_paths(n.as_str(), d).unwrap(), via_succ);
        }
    }

    #[test]
    fn transpose_is_involution(g in graph_strategy(10)) {
        let tt = g.transpose().transpose();
        prop_assert_eq!(edge_set(&tt), edge_set(&g));
        prop_assert_eq!(tt.is_reversed(), g.is_reversed());
        prop_assert!(g.transpose().is_reversed());
    }

    #[test]
    fn pg_is_non_negative_and_self_consistent(g in graph_strategy(8)) {
        let r = potential_gain(&g, &PgConfig::default()).unwrap();
        prop_assert!(r.pg_values().iter().all(|v| *v >= 0.0));
        prop_assert!(r.verify().is_ok());
    }

    #[test]
    fn interchange_round_trip(g in graph_strategy(12), reversed in any::<bool>()) {
        let g = if reversed { g.transpose() } else { g };
        let back = parse_graph(&format_graph(&g)).unwrap();
        prop_assert_eq!(edge_set(&back), edge_set(&g));
        prop_assert_eq!(back.nodes(), g.nodes());
        prop_assert_eq!(back.is_reversed(), g.is_reversed());
        prop_assert_eq!(back.kind(), g.kind());
    }

    #[test]
    fn summary_ignores_class_order(
        rows in proptest::collection::vec((0usize..80, 0usize..40, 0usize..5, 0usize..6), 1..30),
        seed in any::<u64>(),
    ) {
        let build = |order: &[usize]| -> BTreeMap<NodeId, ClassMetrics> {
            order
                .iter()
                .enumerate()
                .map(|(i, &j)| {
                    let (methods, attributes, constructors, depth) = rows[j];
                    (
                        NodeId::new(format!("c{i}")).unwrap(),
                        ClassMetrics { methods, attributes, constructors, depth, ..Default::default() },
                    )
                })
                .collect()
        };
        let identity: Vec<usize> = (0..rows.len()).collect();
        let mut shuffled = identity.clone();
        // deterministic Fisher-Yates from the proptest-drawn seed
        let mut state = seed;
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (state >> 33) as usize % (i + 1));
        }
        let a = summarize(&build(&identity)).unwrap();
        let b = summarize(&build(&shuffled)).unwrap();
        prop_assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn ranking_order_survives_power_of_two_scaling(
        values in proptest::collection::vec(0.0f64..10.0, 1..20),
        exp in -20i32..20,
    ) {
        let map: BTreeMap<NodeId, f64> = values
            .iter()
            .enumerate()
            .map(|(i, v)| (NodeId::new(format!("c{i:02}")).unwrap(), *v))
            .collect();
        let c = 2f64.powi(exp);
        let scaled: BTreeMap<NodeId, f64> = map.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        let a: Vec<NodeId> = ranking::rank("x", &map, None).names().cloned().collect();
        let b: Vec<NodeId> = ranking::rank("x", &scaled, None).names().cloned().collect();
        prop_assert_eq!(a, b);
        prop_assert_eq!(ranking::percentile_ranks(&map), ranking::percentile_ranks(&scaled));
    }
}

#[test]
fn large_graph_round_trip() {
    let n = 6000;
    let names: Vec<NodeId> = (0..n)
        .map(|i| NodeId::new(format!("pkg.C{i:04}")).unwrap())
        .collect();
    // deterministic pseudo-random edges, mean out-degree 5
    let edges = (0..n * 5).map(|i| {
        let src = (i * 7919) % n;
        let dst = (i * 104729 + 13) % n;
        (names[src].clone(), names[dst].clone())
    });
    let g = CouplingGraph::build(CouplingKind::Parameter, names.clone(), edges).unwrap();
    let back = parse_graph(&format_graph(&g)).unwrap();
    assert_eq!(back.node_count(), n);
    assert_eq!(edge_set(&back), edge_set(&g));
    let a = potential_gain(&g, &PgConfig::default()).unwrap();
    let b = potential_gain(&back, &PgConfig::default()).unwrap();
    assert_eq!(a.pg_values(), b.pg_values());
}
