//! Node-level and summary-level comparison of two hierarchies.

use std::collections::HashSet;

use hierarchy_core::Hierarchy;

use crate::StructuralDiff;

/// Compares `restructured` against `original`.
///
/// * `removed_nodes` — labels of `original` absent from `restructured`.
/// * `promoted_nodes` — labels present in both trees (excluding roots)
///   whose parent in `restructured` sits at a strictly shallower depth
///   than their parent in `original`.
/// * `depth_delta`, `avg_bf_delta`, `leaf_delta` — restructured minus
///   original summary properties.
pub fn structural_diff(original: &Hierarchy, restructured: &Hierarchy) -> StructuralDiff {
    let new_labels: HashSet<&str> = restructured.names().iter().map(String::as_str).collect();

    let mut removed_nodes = Vec::new();
    let mut promoted_nodes = Vec::new();
    for node in 0..original.len() {
        let label = original.name(node);
        let Some(new_node) = restructured.node_index(label) else {
            removed_nodes.push(label.to_string());
            continue;
        };
        let (Some(old_parent), Some(new_parent)) =
            (original.parent(node), restructured.parent(new_node))
        else {
            continue;
        };
        if restructured.depth_of(new_parent) < original.depth_of(old_parent) {
            promoted_nodes.push(label.to_string());
        }
    }
    debug_assert!(original
        .names()
        .iter()
        .all(|n| new_labels.contains(n.as_str()) || removed_nodes.contains(n)));

    let before = original.properties();
    let after = restructured.properties();
    StructuralDiff {
        removed_nodes,
        promoted_nodes,
        depth_delta: after.depth as i64 - before.depth as i64,
        avg_bf_delta: after.avg_branching_factor - before.avg_branching_factor,
        leaf_delta: after.num_leaves as i64 - before.num_leaves as i64,
    }
}
