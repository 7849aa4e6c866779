//! JSON child-list format: an object mapping every node name to the
//! (possibly empty) array of its children's names. Exactly one key never
//! appears as a child; that key is the root. Serialization emits keys in
//! pre-order so the document reads top-down.

use std::collections::HashMap;

use serde_json::{Map, Value};

use crate::{Hierarchy, HierarchyError};

pub(crate) fn parse_graph_dict(input: &str) -> Result<Hierarchy, HierarchyError> {
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
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
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
            if parent[ci].is_some() || ci == pi {
                return Err(HierarchyError::MultipleParents {
                    node: child_name.to_owned(),
                });
            }
            parent[ci] = Some(pi);
            children[pi].push(ci);
        }
    }

    let roots: Vec<usize> = (0..n).filter(|&i| parent[i].is_none()).collect();
    let root = match roots.as_slice() {
        [] => return Err(HierarchyError::NoRoot),
        [r] => *r,
        [a, b, ..] => {
            return Err(HierarchyError::MultipleRoots {
                first: names[*a].clone(),
                second: names[*b].clone(),
            })
        }
    };

    // Any node the root cannot reach has a parent (it is not a root), so
    // an unreachable region necessarily contains a directed cycle.
    let mut seen = vec![false; n];
    let mut stack = vec![root];
    while let Some(i) = stack.pop() {
        if !seen[i] {
            seen[i] = true;
            stack.extend(children[i].iter().copied());
        }
    }
    if let Some(unreached) = (0..n).find(|&i| !seen[i]) {
        return Err(HierarchyError::CycleDetected {
            node: names[unreached].clone(),
        });
    }

    Hierarchy::from_parts(names, parent, children, root)
}

pub(crate) fn serialize_graph_dict(h: &Hierarchy) -> String {
    let mut obj = Map::with_capacity(h.len());
    for i in 0..h.len() {
        let kids: Vec<Value> = h
            .children(i)
            .iter()
            .map(|&c| Value::String(h.name(c).to_owned()))
            .collect();
        obj.insert(h.name(i).to_owned(), Value::Array(kids));
    }
    serde_json::to_string_pretty(&Value::Object(obj)).expect("child-list maps serialize")
}
