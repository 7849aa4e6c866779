//! Deterministic, LLM-free restructuring baseline.
//!
//! Two transformations are implemented, gated by the recommendation
//! flags:
//!
//! * **R1 (width)** — chain collapse: every maximal run of single-child
//!   internal nodes is removed and the run's deepest surviving node is
//!   promoted to the run head's parent. Because a collapsed chain is
//!   replaced one-for-one under its head's parent, no new single-child
//!   nodes can appear, so a single pass reaches the fixpoint.
//! * **R4 (single inheritance)** — multi-parent inputs are resolved to
//!   a tree first, keeping each node's shallowest (then
//!   earliest-listed) parent.
//!
//! R2 (balance) and R3 (size) are permissions rather than actions and
//! trigger no transformation. Anything smarter — regrouping nodes by
//! meaning, renaming categories — needs domain knowledge this baseline
//! does not have.

use hierarchy_core::{Hierarchy, HierarchyError, MultiParentGraph};

use crate::RecommendationSet;

/// Explanation line used when no enabled rule changes the tree.
pub const NO_TRANSFORMATION: &str = "no transformation applicable";

/// Applies the enabled transformations to `h`, returning the
/// restructured tree and a change log with one line per removal or
/// promotion. When nothing fires, the tree is returned unchanged and
/// the log reads "no transformation applicable".
pub fn heuristic_restructure(h: &Hierarchy, recs: &RecommendationSet) -> (Hierarchy, String) {
    let mut log: Vec<String> = Vec::new();
    let restructured = if recs.r1_width {
        collapse_chains(h, &mut log)
    } else {
        h.clone()
    };
    if log.is_empty() {
        (restructured, NO_TRANSFORMATION.to_string())
    } else {
        (restructured, log.join("\n"))
    }
}

/// Like [`heuristic_restructure`] but accepts a graph that may contain
/// multiple inheritance. With R4 enabled the graph is first resolved to
/// a tree (each dropped edge is logged); without R4 a multi-parent
/// input is an error, since no enabled rule may touch the extra edges.
pub fn heuristic_restructure_graph(
    graph: &MultiParentGraph,
    recs: &RecommendationSet,
) -> Result<(Hierarchy, String), HierarchyError> {
    let mut log: Vec<String> = Vec::new();
    let tree = if recs.r4_single_inheritance {
        let (tree, dropped) = graph.resolve_detailed()?;
        for (parent, child) in &dropped {
            let kept = tree
                .node_index(child)
                .and_then(|node| tree.parent(node))
                .map(|p| tree.name(p).to_string())
                .unwrap_or_default();
            log.push(format!(
                "removed edge '{parent}' -> '{child}': kept single parent '{kept}' (single-inheritance rule)"
            ));
        }
        tree
    } else if graph.has_multiple_inheritance() {
        let node = (0..graph.len())
            .find(|&n| graph.parents(n).len() > 1)
            .map(|n| graph.name(n).to_string())
            .unwrap_or_default();
        return Err(HierarchyError::MultipleParents { node });
    } else {
        graph.resolve()?
    };

    let (restructured, tree_log) = heuristic_restructure(&tree, recs);
    if tree_log != NO_TRANSFORMATION {
        log.push(tree_log);
    }
    if log.is_empty() {
        Ok((restructured, NO_TRANSFORMATION.to_string()))
    } else {
        Ok((restructured, log.join("\n")))
    }
}

/// Removes every non-root single-child internal node, reattaching each
/// surviving node to its nearest surviving ancestor. Appends one log
/// line per removal and per reparented node.
fn collapse_chains(h: &Hierarchy, log: &mut Vec<String>) -> Hierarchy {
    let removed: Vec<bool> = (0..h.len())
        .map(|node| node != h.root() && h.children(node).len() == 1)
        .collect();
    if !removed.iter().any(|&r| r) {
        return h.clone();
    }

    // Nearest kept ancestor; the root is always kept.
    let surviving_parent = |node: usize| -> usize {
        let mut cursor = h.parent(node).expect("non-root node has a parent");
        while removed[cursor] {
            cursor = h.parent(cursor).expect("root is never removed");
        }
        cursor
    };

    let mut edges: Vec<(String, String)> = Vec::with_capacity(h.len() - 1);
    for node in 0..h.len() {
        if node == h.root() {
            continue;
        }
        if removed[node] {
            log.push(format!(
                "removed '{}': single-child chain node (width rule)",
                h.name(node)
            ));
            continue;
        }
        let old_parent = h.parent(node).expect("non-root node has a parent");
        let new_parent = surviving_parent(node);
        if new_parent != old_parent {
            log.push(format!(
                "promoted '{}' from under '{}' to under '{}' (width rule)",
                h.name(node),
                h.name(old_parent),
                h.name(new_parent)
            ));
        }
        edges.push((h.name(new_parent).to_string(), h.name(node).to_string()));
    }

    Hierarchy::from_edges(edges.iter().map(|(p, c)| (p.as_str(), c.as_str())))
        .expect("collapsing chains preserves treeness")
}
