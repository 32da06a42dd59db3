mod common;

use common::oracles::DenseGraph;
use osn_core::graphstats::{
    clustering_coefficient, distance_profile, graph_report, reciprocal_pairs, weak_components,
};
use osn_core::model::{BlogrollGraph, UserId};
use proptest::prelude::*;

fn graph_strategy() -> impl Strategy<Value = BlogrollGraph> {
    (1u32..30).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec((0..n, 0..n), 0..(n as usize * 2)),
        )
            .prop_map(|(n, edges)| {
                let mut g = BlogrollGraph::from_edges(
                    edges.into_iter().map(|(a, b)| (UserId(a), UserId(b))),
                );
                for i in 0..n {
                    g.add_node(UserId(i));
                }
                g
            })
    })
}

proptest! {
    #[test]
    fn statistics_match_brute_force(g in graph_strategy()) {
        let dense = DenseGraph::new(&g);
        let comps = weak_components(&g);
        prop_assert_eq!(&comps, &dense.components());
        prop_assert_eq!(comps.iter().map(Vec::len).sum::<usize>(), g.node_count());
        prop_assert_eq!(reciprocal_pairs(&g), dense.reciprocal_pairs());
        prop_assert!(reciprocal_pairs(&g) <= g.edge_count() / 2);
        for c in &comps {
            let cc = clustering_coefficient(&g, c);
            prop_assert_eq!(cc.to_bits(), dense.clustering(c).to_bits());
            prop_assert!((0.0..=1.0).contains(&cc));
            let (lo, hi) = distance_profile(&g, c);
            let (olo, ohi) = dense.distance_profile(c);
            prop_assert_eq!((lo.to_bits(), hi.to_bits()), (olo.to_bits(), ohi.to_bits()));
            prop_assert!(lo <= hi);
            if c.len() >= 2 {
                prop_assert!(lo >= 1.0);
            }
        }
    }

    #[test]
    fn relabeling_preserves_statistics(g in graph_strategy(), offset in 1u32..100) {
        // reverse the id order and shift
        let max = g.nodes.iter().next_back().map(|u| u.0).unwrap_or(0);
        let relabel = |u: UserId| UserId(max - u.0 + offset);
        let mut h = BlogrollGraph::from_edges(g.edges.iter().map(|&(a, b)| (relabel(a), relabel(b))));
        for &u in &g.nodes {
            h.add_node(relabel(u));
        }
        let a = graph_report(&g, usize::MAX);
        let b = graph_report(&h, usize::MAX);
        prop_assert_eq!(&a.summary, &b.summary);
        let key = |r: &osn_core::graphstats::ComponentReport| {
            (r.nodes, r.edges, r.reciprocal_pairs, r.shortest_avg_distance.to_bits(), r.longest_avg_distance.to_bits())
        };
        let mut ka: Vec<_> = a.components.iter().map(key).collect();
        let mut kb: Vec<_> = b.components.iter().map(key).collect();
        ka.sort();
        kb.sort();
        prop_assert_eq!(ka, kb);
    }
}

#[test]
fn complete_graph_and_tree_extremes() {
    let mut edges = Vec::new();
    for a in 0..6u32 {
        for b in 0..6u32 {
            if a < b {
                edges.push((UserId(a), UserId(b)));
            }
        }
    }
    let k6 = BlogrollGraph::from_edges(edges);
    let all: Vec<_> = k6.nodes.iter().copied().collect();
    assert_eq!(clustering_coefficient(&k6, &all), 1.0);

    let tree = BlogrollGraph::from_edges(
        [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)].map(|(a, b)| (UserId(a), UserId(b))),
    );
    let all: Vec<_> = tree.nodes.iter().copied().collect();
    assert_eq!(clustering_coefficient(&tree, &all), 0.0);
}
