//! Property tests: both interchange formats round-trip arbitrary trees,
//! and tree distances agree with an independent breadth-first oracle.

use std::collections::VecDeque;

use hierarchy_core::{all_pairs_distances, Hierarchy};
use proptest::prelude::*;

/// Random parent vector: node i+1 attaches to a uniformly random earlier
/// node. Labels are distinct by construction.
fn arb_tree() -> impl Strategy<Value = Hierarchy> {
    (2usize..60)
        .prop_flat_map(|n| {
            let parents: Vec<BoxedStrategy<usize>> = (1..n)
                .map(|i| (0..i).prop_map(|p| p).boxed())
                .collect();
            (Just(n), parents)
        })
        .prop_map(|(n, parents)| {
            let names: Vec<String> = (0..n).map(|i| format!("node_{i:03}")).collect();
            let edges: Vec<(&str, &str)> = parents
                .iter()
                .enumerate()
                .map(|(i, &p)| (names[p].as_str(), names[i + 1].as_str()))
                .collect();
            Hierarchy::from_edges(edges).expect("random parent vectors form trees")
        })
}

/// Breadth-first distance oracle that never consults the LCA logic.
fn bfs_distance(h: &Hierarchy, from: usize, to: usize) -> u32 {
    let n = h.len();
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        if let Some(p) = h.parent(i) {
            neighbors[i].push(p);
            neighbors[p].push(i);
        }
    }
    let mut dist = vec![u32::MAX; n];
    dist[from] = 0;
    let mut q = VecDeque::from([from]);
    while let Some(u) = q.pop_front() {
        if u == to {
            break;
        }
        for &v in &neighbors[u] {
            if dist[v] == u32::MAX {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
    dist[to]
}

proptest! {
    #[test]
    fn text_round_trip(h in arb_tree()) {
        let text = h.serialize_text();
        let back = Hierarchy::parse_text(&text).unwrap();
        prop_assert_eq!(&back, &h);
        prop_assert_eq!(back.serialize_text(), text);
    }

    #[test]
    fn graph_dict_round_trip(h in arb_tree()) {
        let doc = h.serialize_graph_dict();
        let back = Hierarchy::parse_graph_dict(&doc).unwrap();
        prop_assert_eq!(&back, &h);
    }

    #[test]
    fn distance_is_a_tree_metric(h in arb_tree(), seed in any::<u64>()) {
        let n = h.len();
        let pick = |s: u64| (s % n as u64) as usize;
        let (u, v, w) = (pick(seed), pick(seed >> 16), pick(seed >> 32));
        let duv = h.distance_by_index(u, v);
        let dvu = h.distance_by_index(v, u);
        prop_assert_eq!(duv, dvu);
        prop_assert_eq!(h.distance_by_index(u, u), 0);
        // Triangle inequality.
        prop_assert!(duv <= h.distance_by_index(u, w) + h.distance_by_index(w, v));
        // Agreement with the BFS oracle.
        prop_assert_eq!(duv, bfs_distance(&h, u, v));
    }

    #[test]
    fn all_pairs_is_batch_invariant(h in arb_tree(), batch_rows in 1usize..9) {
        let whole: Vec<Vec<u32>> = all_pairs_distances(&h, h.len())
            .flat_map(|b| b.rows)
            .collect();
        let chunked: Vec<Vec<u32>> = all_pairs_distances(&h, batch_rows)
            .flat_map(|b| b.rows)
            .collect();
        prop_assert_eq!(chunked, whole);
    }
}
