//! Staging representation for inputs that are DAGs rather than trees,
//! plus the deterministic rule that turns one into a tree: every node
//! with several parents keeps the parent closest to the source (its
//! widest placement), ties broken by pre-order position.

use std::collections::{HashMap, VecDeque};

use serde_json::{Map, Value};

use crate::{Hierarchy, HierarchyError};

/// A connected, single-source DAG with string-labelled nodes, used to
/// stage hierarchies whose raw form contains multiple inheritance.
#[derive(Debug, Clone)]
pub struct MultiParentGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    children: Vec<Vec<usize>>,
    parents: Vec<Vec<usize>>,
}

impl MultiParentGraph {
    /// Parses the same JSON child-list format as
    /// [`Hierarchy::parse_graph_dict`], except that a node may appear in
    /// several child lists.
    pub fn parse_graph_dict(input: &str) -> Result<Self, HierarchyError> {
        let value: Value = serde_json::from_str(input)?;
        let obj: &Map<String, Value> = value.as_object().ok_or(HierarchyError::NotAnObject)?;
        if obj.is_empty() {
            return Err(HierarchyError::EmptyInput);
        }

        let mut names: Vec<String> = Vec::with_capacity(obj.len());
        let mut index: HashMap<String, usize> = HashMap::with_capacity(obj.len());
        for key in obj.keys() {
            if index.insert(key.clone(), names.len()).is_some() {
                return Err(HierarchyError::DuplicateNodeId { name: key.clone() });
            }
            names.push(key.clone());
        }

        let n = names.len();
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut parents: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (key, list) in obj {
            let pi = index[key];
            let arr = list
                .as_array()
                .ok_or_else(|| HierarchyError::InvalidChildList { node: key.clone() })?;
            for child in arr {
                let child_name = child
                    .as_str()
                    .ok_or_else(|| HierarchyError::InvalidChildList { node: key.clone() })?;
                let ci = *index
                    .get(child_name)
                    .ok_or_else(|| HierarchyError::UnknownChild {
                        parent: key.clone(),
                        child: child_name.to_owned(),
                    })?;
                if children[pi].contains(&ci) {
                    // The same edge twice carries no information.
                    continue;
                }
                children[pi].push(ci);
                parents[ci].push(pi);
            }
        }

        Ok(MultiParentGraph {
            names,
            index,
            children,
            parents,
        })
    }

    /// Builds a graph from `(parent, child)` edges, in order.
    pub fn from_edges<'a, I>(edges: I) -> Result<Self, HierarchyError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut children: Vec<Vec<usize>> = Vec::new();
        let mut parents: Vec<Vec<usize>> = Vec::new();
        let intern = |name: &str,
                          names: &mut Vec<String>,
                          index: &mut HashMap<String, usize>,
                          children: &mut Vec<Vec<usize>>,
                          parents: &mut Vec<Vec<usize>>| {
            if let Some(&i) = index.get(name) {
                i
            } else {
                let i = names.len();
                names.push(name.to_owned());
                index.insert(name.to_owned(), i);
                children.push(Vec::new());
                parents.push(Vec::new());
                i
            }
        };
        for (p, c) in edges {
            let pi = intern(p, &mut names, &mut index, &mut children, &mut parents);
            let ci = intern(c, &mut names, &mut index, &mut children, &mut parents);
            if children[pi].contains(&ci) {
                continue;
            }
            children[pi].push(ci);
            parents[ci].push(pi);
        }
        if names.is_empty() {
            return Err(HierarchyError::EmptyInput);
        }
        Ok(MultiParentGraph {
            names,
            index,
            children,
            parents,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, node: usize) -> &str {
        &self.names[node]
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn parents(&self, node: usize) -> &[usize] {
        &self.parents[node]
    }

    /// True when some node has more than one parent.
    pub fn has_multiple_inheritance(&self) -> bool {
        self.parents.iter().any(|p| p.len() > 1)
    }

    /// Resolves the DAG into a tree. See [`MultiParentGraph::resolve_detailed`].
    pub fn resolve(&self) -> Result<Hierarchy, HierarchyError> {
        self.resolve_detailed().map(|(h, _)| h)
    }

    /// Resolves the DAG into a tree, also reporting which
    /// `(parent, child)` edges were dropped.
    ///
    /// Every multi-parent node keeps the parent with the smallest
    /// source-distance (its widest placement); among equally shallow
    /// parents, the one visited first in a pre-order walk from the source
    /// wins. All nodes are retained.
    pub fn resolve_detailed(&self) -> Result<(Hierarchy, Vec<(String, String)>), HierarchyError> {
        let n = self.len();
        let sources: Vec<usize> = (0..n).filter(|&i| self.parents[i].is_empty()).collect();
        let source = match sources.as_slice() {
            [] => return Err(HierarchyError::NoSource),
            [s] => *s,
            [a, b, ..] => {
                return Err(HierarchyError::MultipleRoots {
                    first: self.names[*a].clone(),
                    second: self.names[*b].clone(),
                })
            }
        };

        // Kahn's algorithm: if some node never clears its in-degree the
        // graph has a directed cycle.
        let mut indeg: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = VecDeque::new();
        queue.push_back(source);
        let mut processed = 0usize;
        while let Some(u) = queue.pop_front() {
            processed += 1;
            for &v in &self.children[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    queue.push_back(v);
                }
            }
        }
        if processed != n {
            let node = (0..n)
                .find(|&i| indeg[i] > 0)
                .expect("unprocessed node has remaining in-degree");
            return Err(HierarchyError::CycleDetected {
                node: self.names[node].clone(),
            });
        }

        // Source distance (edge count along shortest path).
        let mut dist = vec![u32::MAX; n];
        dist[source] = 0;
        let mut bfs = VecDeque::from([source]);
        while let Some(u) = bfs.pop_front() {
            for &v in &self.children[u] {
                if dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    bfs.push_back(v);
                }
            }
        }

        // Pre-order position of each node's first visit.
        let mut pos = vec![usize::MAX; n];
        let mut counter = 0usize;
        let mut stack = vec![source];
        while let Some(u) = stack.pop() {
            if pos[u] != usize::MAX {
                continue;
            }
            pos[u] = counter;
            counter += 1;
            for &c in self.children[u].iter().rev() {
                stack.push(c);
            }
        }

        // Pick the kept parent of every non-source node.
        let mut kept: Vec<Option<usize>> = vec![None; n];
        for v in 0..n {
            if v == source {
                continue;
            }
            let best = self.parents[v]
                .iter()
                .copied()
                .min_by_key(|&p| (dist[p], pos[p]))
                .expect("non-source node has at least one parent");
            kept[v] = Some(best);
        }

        let mut dropped: Vec<(String, String)> = Vec::new();
        let mut edges: Vec<(&str, &str)> = Vec::new();
        for p in 0..n {
            for &c in &self.children[p] {
                if kept[c] == Some(p) {
                    edges.push((self.names[p].as_str(), self.names[c].as_str()));
                } else {
                    dropped.push((self.names[p].clone(), self.names[c].clone()));
                }
            }
        }
        // Re-emit edges in pre-order of the *kept* parent so the resulting
        // child order matches the original listing under each parent.
        let h = Hierarchy::from_edges(edges)?;
        Ok((h, dropped))
    }
}
