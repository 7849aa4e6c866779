//! Indented text format: one node per line, exactly two spaces of
//! indentation per depth level, node identifier = trimmed line content.
//! Lines appear in pre-order, so a line's parent is the nearest line above
//! it with one less indent level. Blank lines are ignored; trailing `\r`
//! is tolerated so CRLF files parse.

use std::collections::HashMap;

use crate::{Hierarchy, HierarchyError};

pub(crate) fn parse_text(input: &str) -> Result<Hierarchy, HierarchyError> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut parent: Vec<Option<usize>> = Vec::new();
    let mut children: Vec<Vec<usize>> = Vec::new();
    let mut depth: Vec<u32> = Vec::new();
    // stack[d] = index of the most recent node seen at depth d.
    let mut stack: Vec<usize> = Vec::new();

    for (i, raw) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end();
        if line.trim().is_empty() {
            continue;
        }
        let trimmed = line.trim_start_matches(' ');
        if trimmed.starts_with('\t') {
            // Tabs have no defined width in this format; reject rather
            // than silently mis-nesting.
            return Err(HierarchyError::InvalidIndent { line: line_no });
        }
        let spaces = line.len() - trimmed.len();
        if spaces % 2 != 0 {
            return Err(HierarchyError::InvalidIndent { line: line_no });
        }
        let level = spaces / 2;
        if level > stack.len() {
            return Err(HierarchyError::IndentJump { line: line_no });
        }
        if level == 0 && !stack.is_empty() {
            return Err(HierarchyError::MultipleRoots {
                first: names[stack[0]].clone(),
                second: trimmed.to_owned(),
            });
        }

        let name = trimmed.to_owned();
        if index.contains_key(&name) {
            return Err(HierarchyError::DuplicateNodeId { name });
        }
        let id = names.len();
        index.insert(name.clone(), id);
        names.push(name);
        parent.push(None);
        children.push(Vec::new());
        depth.push(level as u32);

        stack.truncate(level);
        if let Some(&p) = stack.last() {
            parent[id] = Some(p);
            children[p].push(id);
        }
        stack.push(id);
    }

    if names.is_empty() {
        return Err(HierarchyError::EmptyInput);
    }
    // Lines arrive in pre-order, so the arrays are already canonical.
    Ok(Hierarchy {
        names,
        index,
        parent,
        children,
        depth,
    })
}

pub(crate) fn serialize_text(h: &Hierarchy) -> String {
    let mut out = String::new();
    // Pre-order is index order, and depth is cached per node.
    for i in 0..h.len() {
        for _ in 0..h.depth_of(i) {
            out.push_str("  ");
        }
        out.push_str(h.name(i));
        out.push('\n');
    }
    out
}
