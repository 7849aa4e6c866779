//! `workbench export-viz`: render a hierarchy as a DOT digraph, one node
//! statement per tree node and one edge per parent-child pair.

use clap::Args;
use hierarchy_core::Hierarchy;
use std::path::PathBuf;

use crate::input::load_tree;
use crate::manifest::{ConfigSnapshot, ManifestWriter, MANIFEST_FILE};
use crate::CommandError;

#[derive(Debug, Args)]
pub struct ExportVizArgs {
    /// Hierarchy file to render.
    pub input: PathBuf,
    /// Directory to write tree.dot and manifest.json into; omitting it
    /// prints the document instead.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn quote(name: &str) -> String {
    format!("\"{}\"", name.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders the DOT document. `manifest_ref` adds the back-reference comment
/// used when the document is written into a run directory.
pub fn render_dot(tree: &Hierarchy, manifest_ref: bool) -> String {
    let mut out = String::from("digraph hierarchy {\n");
    if manifest_ref {
        out.push_str(&format!("  // manifest={MANIFEST_FILE}\n"));
    }
    for index in 0..tree.len() {
        out.push_str(&format!("  {};\n", quote(tree.name(index))));
    }
    for (parent, child) in tree.edges() {
        out.push_str(&format!("  {} -> {};\n", quote(parent), quote(child)));
    }
    out.push_str("}\n");
    out
}

pub fn run(args: &ExportVizArgs) -> Result<String, CommandError> {
    let tree = load_tree(&args.input)?;

    if let Some(out) = &args.out {
        let dot = render_dot(&tree, true);
        let mut writer =
            ManifestWriter::begin(out, "export-viz", &[&args.input], ConfigSnapshot::default())?;
        let path = writer.write_text("tree.dot", &dot)?;
        writer.finish()?;
        Ok(format!(
            "wrote {} ({} nodes, {} edges)",
            path.display(),
            tree.len(),
            tree.len().saturating_sub(1)
        ))
    } else {
        Ok(render_dot(&tree, false))
    }
}
