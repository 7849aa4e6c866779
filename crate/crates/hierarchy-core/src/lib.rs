//! Rooted hierarchies (labelled trees) and the operations the rest of the
//! workspace builds on: parsing and serialization in two interchange
//! formats, structural property summaries, exact tree distances with
//! memory-bounded all-pairs streaming, and resolution of multi-parent
//! graphs into trees.
//!
//! A [`Hierarchy`] is a single-rooted tree whose nodes are identified by
//! their (unique) labels. Nodes are stored in pre-order, children keep the
//! order in which the input listed them, and both are preserved exactly by
//! the serializers, so `parse -> serialize` is the identity on canonical
//! input.

#![forbid(unsafe_code)]

mod distance;
mod graph_dict;
mod multi_parent;
mod text;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use distance::{all_pairs_distances, AllPairsDistances, DistanceBatch};
pub use multi_parent::MultiParentGraph;

/// Errors raised while building or querying hierarchies.
#[derive(Debug, Error)]
pub enum HierarchyError {
    /// The input document contained no nodes at all.
    #[error("input contains no nodes")]
    EmptyInput,

    /// A line is indented by something other than two spaces per level.
    #[error("line {line}: indentation must be two spaces per level")]
    InvalidIndent { line: usize },

    /// A line is nested more than one level below the line above it.
    #[error("line {line}: indent level jumps past the previous line's children")]
    IndentJump { line: usize },

    /// More than one node sits at the top level.
    #[error("multiple roots: {first:?} and {second:?}")]
    MultipleRoots { first: String, second: String },

    /// The same node identifier appeared twice.
    #[error("duplicate node id {name:?}")]
    DuplicateNodeId { name: String },

    /// The graph document was not syntactically valid JSON.
    #[error("invalid graph document: {0}")]
    Json(#[from] serde_json::Error),

    /// The graph document was JSON but not an object of child lists.
    #[error("graph document must be a JSON object mapping node to child list")]
    NotAnObject,

    /// A child list contained something other than a string.
    #[error("child list of {node:?} must contain only strings")]
    InvalidChildList { node: String },

    /// A child name never appears as a key of the graph document.
    #[error("child {child:?} of {parent:?} never appears as a node key")]
    UnknownChild { parent: String, child: String },

    /// Every node appears as a child, so no root exists.
    #[error("no root: every node appears as a child")]
    NoRoot,

    /// A node is listed as the child of more than one parent.
    #[error("node {node:?} has more than one parent")]
    MultipleParents { node: String },

    /// The graph contains a directed cycle.
    #[error("cycle detected at node {node:?}")]
    CycleDetected { node: String },

    /// A queried node does not exist in the hierarchy.
    #[error("unknown node {0:?}")]
    UnknownNode(String),

    /// A multi-parent graph has no parentless source node.
    #[error("graph has no source node")]
    NoSource,

    /// An edge list did not describe a single connected tree.
    #[error("edge list does not form a tree: {reason}")]
    NotATree { reason: String },
}

/// A single-rooted tree with string-labelled nodes.
///
/// Nodes are indexed `0..len()` in pre-order (the root is index 0) and
/// child order is significant: it is the order children were listed in
/// whatever input built the hierarchy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hierarchy {
    names: Vec<String>,
    index: HashMap<String, usize>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<u32>,
}

/// Structural summary of a hierarchy.
///
/// `avg_branching_factor` is edges divided by internal-node count,
/// truncated to one decimal (the resolution the rest of the pipeline
/// reports branching factors at). A single-node tree has no internal
/// nodes and reports 0.0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeProperties {
    pub num_nodes: usize,
    pub num_edges: usize,
    pub depth: usize,
    pub num_leaves: usize,
    pub max_degree: usize,
    pub avg_branching_factor: f64,
}

impl Hierarchy {
    /// Builds a hierarchy from `(parent, child)` edges. The root is the
    /// unique node that never appears as a child; children keep edge
    /// insertion order. Fails unless the edges form exactly one tree.
    pub fn from_edges<'a, I>(edges: I) -> Result<Self, HierarchyError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let intern = |name: &str, names: &mut Vec<String>, index: &mut HashMap<String, usize>| {
            if let Some(&i) = index.get(name) {
                i
            } else {
                let i = names.len();
                names.push(name.to_owned());
                index.insert(name.to_owned(), i);
                i
            }
        };

        let mut children: Vec<Vec<usize>> = Vec::new();
        let mut parent: Vec<Option<usize>> = Vec::new();
        for (p, c) in edges {
            let pi = intern(p, &mut names, &mut index);
            children.resize(names.len(), Vec::new());
            parent.resize(names.len(), None);
            let ci = intern(c, &mut names, &mut index);
            children.resize(names.len(), Vec::new());
            parent.resize(names.len(), None);
            if parent[ci].is_some() {
                return Err(HierarchyError::MultipleParents {
                    node: names[ci].clone(),
                });
            }
            if pi == ci {
                return Err(HierarchyError::CycleDetected {
                    node: names[ci].clone(),
                });
            }
            parent[ci] = Some(pi);
            children[pi].push(ci);
        }

        if names.is_empty() {
            return Err(HierarchyError::EmptyInput);
        }
        let roots: Vec<usize> = (0..names.len()).filter(|&i| parent[i].is_none()).collect();
        match roots.as_slice() {
            [] => Err(HierarchyError::NoRoot),
            [root] => {
                let h = Self::from_parts(names, parent, children, *root)?;
                Ok(h)
            }
            [a, b, ..] => Err(HierarchyError::MultipleRoots {
                first: names[*a].clone(),
                second: names[*b].clone(),
            }),
        }
    }

    /// Canonicalizes raw adjacency into pre-order storage, verifying that
    /// every node is reachable from the root (i.e. the edges form a tree).
    fn from_parts(
        names: Vec<String>,
        parent: Vec<Option<usize>>,
        children: Vec<Vec<usize>>,
        root: usize,
    ) -> Result<Self, HierarchyError> {
        let n = names.len();
        // Pre-order walk assigning new indices.
        let mut order: Vec<usize> = Vec::with_capacity(n); // new index -> old index
        let mut stack = vec![root];
        let mut seen = vec![false; n];
        while let Some(old) = stack.pop() {
            if seen[old] {
                return Err(HierarchyError::CycleDetected {
                    node: names[old].clone(),
                });
            }
            seen[old] = true;
            order.push(old);
            for &c in children[old].iter().rev() {
                stack.push(c);
            }
        }
        if order.len() != n {
            let missing = (0..n).find(|&i| !seen[i]).expect("some node unvisited");
            return Err(HierarchyError::NotATree {
                reason: format!("node {:?} is not reachable from the root", names[missing]),
            });
        }

        let mut renumber = vec![0usize; n]; // old index -> new index
        for (new, &old) in order.iter().enumerate() {
            renumber[old] = new;
        }
        let new_names: Vec<String> = order.iter().map(|&old| names[old].clone()).collect();
        let new_parent: Vec<Option<usize>> = order
            .iter()
            .map(|&old| parent[old].map(|p| renumber[p]))
            .collect();
        let new_children: Vec<Vec<usize>> = order
            .iter()
            .map(|&old| children[old].iter().map(|&c| renumber[c]).collect())
            .collect();
        let index = new_names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();

        let mut depth = vec![0u32; n];
        for i in 1..n {
            let p = new_parent[i].expect("non-root node has a parent");
            depth[i] = depth[p] + 1; // parents precede children in pre-order
        }

        Ok(Hierarchy {
            names: new_names,
            index,
            parent: new_parent,
            children: new_children,
            depth,
        })
    }

    /// Parses the indented text format: one node per line, two spaces of
    /// indentation per depth level, node identifier = trimmed content.
    pub fn parse_text(input: &str) -> Result<Self, HierarchyError> {
        text::parse_text(input)
    }

    /// Serializes to the indented text format; the exact inverse of
    /// [`Hierarchy::parse_text`]. Every line is newline-terminated.
    pub fn serialize_text(&self) -> String {
        text::serialize_text(self)
    }

    /// Parses a JSON object mapping each node to its list of children.
    /// Every child must itself appear as a key; the root is the unique
    /// key that never appears as a child.
    pub fn parse_graph_dict(input: &str) -> Result<Self, HierarchyError> {
        graph_dict::parse_graph_dict(input)
    }

    /// Serializes to the JSON child-list format with keys in pre-order.
    pub fn serialize_graph_dict(&self) -> String {
        graph_dict::serialize_graph_dict(self)
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// Hierarchies are never empty, but the accessor keeps clippy and
    /// callers honest.
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// The root's index (always 0 in pre-order storage).
    pub fn root(&self) -> usize {
        0
    }

    /// Node label for an index.
    pub fn name(&self, node: usize) -> &str {
        &self.names[node]
    }

    /// All node labels in pre-order.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Index of a labelled node, if present.
    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Children of a node, in input order.
    pub fn children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    /// Parent of a node (`None` for the root).
    pub fn parent(&self, node: usize) -> Option<usize> {
        self.parent[node]
    }

    /// Edge count from the root down to `node`.
    pub fn depth_of(&self, node: usize) -> u32 {
        self.depth[node]
    }

    /// True when the node has no children.
    pub fn is_leaf(&self, node: usize) -> bool {
        self.children[node].is_empty()
    }

    /// `(parent, child)` label pairs in pre-order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        (1..self.len()).map(move |i| {
            let p = self.parent[i].expect("non-root node has a parent");
            (self.names[p].as_str(), self.names[i].as_str())
        })
    }

    /// Structural property summary; see [`TreeProperties`].
    pub fn properties(&self) -> TreeProperties {
        let num_nodes = self.len();
        let num_edges = num_nodes - 1;
        let depth = self.depth.iter().copied().max().unwrap_or(0) as usize;
        let num_leaves = (0..num_nodes).filter(|&i| self.is_leaf(i)).count();
        let max_degree = self.children.iter().map(Vec::len).max().unwrap_or(0);
        let internal = num_nodes - num_leaves;
        let avg_branching_factor = if internal == 0 {
            0.0
        } else {
            // Truncated, not rounded, to one decimal: that is the
            // resolution branching factors are compared at downstream.
            (num_edges as f64 / internal as f64 * 10.0).floor() / 10.0
        };
        TreeProperties {
            num_nodes,
            num_edges,
            depth,
            num_leaves,
            max_degree,
            avg_branching_factor,
        }
    }

    /// Number of edges on the unique path between two labelled nodes.
    pub fn tree_distance(&self, u: &str, v: &str) -> Result<u32, HierarchyError> {
        let ui = self
            .node_index(u)
            .ok_or_else(|| HierarchyError::UnknownNode(u.to_owned()))?;
        let vi = self
            .node_index(v)
            .ok_or_else(|| HierarchyError::UnknownNode(v.to_owned()))?;
        Ok(self.distance_by_index(ui, vi))
    }

    /// Path length between two nodes by index, via the lowest common
    /// ancestor: `depth(u) + depth(v) - 2 * depth(lca)`.
    pub fn distance_by_index(&self, u: usize, v: usize) -> u32 {
        let (mut a, mut b) = (u, v);
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].expect("deeper node has a parent");
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].expect("deeper node has a parent");
        }
        while a != b {
            a = self.parent[a].expect("nodes below the root have parents");
            b = self.parent[b].expect("nodes below the root have parents");
        }
        (self.depth[u] - self.depth[a]) + (self.depth[v] - self.depth[a])
    }
}
