//! Input loading with extension-based format detection: `.json` files hold
//! the graph-dictionary format (which may contain multiple inheritance),
//! anything else is the two-space-indented text format.

use hierarchy_core::{Hierarchy, MultiParentGraph};
use std::path::Path;

use crate::CommandError;

/// A parsed input file: either a tree already, or a graph that may still
/// carry multiple-inheritance edges.
#[derive(Debug)]
pub enum LoadedInput {
    Tree(Hierarchy),
    Graph(MultiParentGraph),
}

/// Reads a file, mapping IO problems to input errors.
pub fn read_file(path: &Path) -> Result<String, CommandError> {
    std::fs::read_to_string(path)
        .map_err(|e| CommandError::Input(format!("cannot read {}: {e}", path.display())))
}

/// True when the path should be parsed as a graph dictionary.
pub fn is_graph_dict(path: &Path) -> bool {
    path.extension().is_some_and(|ext| ext.eq_ignore_ascii_case("json"))
}

/// Parses a hierarchy file in whichever format its extension announces.
pub fn load_input(path: &Path) -> Result<LoadedInput, CommandError> {
    let text = read_file(path)?;
    if is_graph_dict(path) {
        let graph = MultiParentGraph::parse_graph_dict(&text)
            .map_err(|e| CommandError::Input(format!("{}: {e}", path.display())))?;
        Ok(LoadedInput::Graph(graph))
    } else {
        let tree = Hierarchy::parse_text(&text)
            .map_err(|e| CommandError::Input(format!("{}: {e}", path.display())))?;
        Ok(LoadedInput::Tree(tree))
    }
}

/// Loads an input that must already be a single-inheritance tree.
///
/// Graph-dictionary files are accepted as long as no node has more than one
/// parent; otherwise the caller is pointed at the restructure command, which
/// owns the flattening rule.
pub fn load_tree(path: &Path) -> Result<Hierarchy, CommandError> {
    match load_input(path)? {
        LoadedInput::Tree(tree) => Ok(tree),
        LoadedInput::Graph(graph) => {
            if graph.has_multiple_inheritance() {
                return Err(CommandError::Input(format!(
                    "{}: input contains multiple-inheritance nodes; flatten it first with \
                     `workbench restructure --engine heuristic --recs r4`",
                    path.display()
                )));
            }
            graph
                .resolve()
                .map_err(|e| CommandError::Input(format!("{}: {e}", path.display())))
        }
    }
}
