//! `workbench analyze`: structural properties plus the embedding settings
//! the tree would get by default.

use clap::Args;
use poincare_geometry::{compute_tau, select_dimension};
use serde::Serialize;
use std::path::PathBuf;

use crate::input::load_tree;
use crate::manifest::{ConfigSnapshot, ManifestWriter};
use crate::CommandError;

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Hierarchy file (two-space-indented text, or .json graph dictionary).
    pub input: PathBuf,
    /// Directory to write properties.json and manifest.json into.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// The eight analysis fields: six structural properties plus the
/// recommended dimension and edge length.
#[derive(Debug, Clone, Serialize)]
pub struct PropertiesDoc {
    pub input: String,
    pub num_nodes: usize,
    pub num_edges: usize,
    pub depth: usize,
    pub num_leaves: usize,
    pub max_degree: usize,
    pub avg_branching_factor: f64,
    pub recommended_dimension: usize,
    pub tau: f64,
}

pub fn run(args: &AnalyzeArgs) -> Result<String, CommandError> {
    let tree = load_tree(&args.input)?;
    let props = tree.properties();
    let doc = PropertiesDoc {
        input: args.input.display().to_string(),
        num_nodes: props.num_nodes,
        num_edges: props.num_edges,
        depth: props.depth,
        num_leaves: props.num_leaves,
        max_degree: props.max_degree,
        avg_branching_factor: props.avg_branching_factor,
        recommended_dimension: select_dimension(props.max_degree.max(1)),
        tau: compute_tau(props.depth.max(1) as u32, f64::EPSILON),
    };

    if let Some(out) = &args.out {
        let mut writer = ManifestWriter::begin(
            out,
            "analyze",
            &[&args.input],
            ConfigSnapshot {
                dimension: Some(doc.recommended_dimension),
                tau: Some(doc.tau),
                epsilon: Some(f64::EPSILON),
                ..ConfigSnapshot::default()
            },
        )?;
        writer.write_json("properties.json", &doc)?;
        writer.finish()?;
    }

    Ok(format!(
        "{}\n  nodes {}  edges {}  depth {}  leaves {}  max degree {}  avg branching factor {}\n  \
         recommended dimension {}  tau {:.6}",
        doc.input,
        doc.num_nodes,
        doc.num_edges,
        doc.depth,
        doc.num_leaves,
        doc.max_degree,
        doc.avg_branching_factor,
        doc.recommended_dimension,
        doc.tau
    ))
}
