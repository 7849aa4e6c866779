//! `workbench compare`: gate a restructured hierarchy through validation,
//! embed both versions under one shared configuration (dimension from the
//! larger maximum degree, edge length from the larger depth), and report a
//! distortion row per tree per strategy plus the structural diff.
//!
//! Sharing the configuration means the distortion difference between the
//! two rows reflects structure alone, not settings.

use clap::Args;
use embedders::Strategy;
use hierarchy_core::Hierarchy;
use poincare_geometry::{compute_tau, select_dimension, EmbeddingConfig};
use restructure::{structural_diff, validate_candidate, StructuralDiff};
use serde::Serialize;
use std::path::PathBuf;

use crate::commands::{embed_and_evaluate, parse_strategy_selection, MetricsRow};
use crate::input::{is_graph_dict, load_tree, read_file};
use crate::manifest::{ConfigSnapshot, ManifestWriter};
use crate::CommandError;

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// The original hierarchy.
    pub original: PathBuf,
    /// The restructured candidate (indented text format).
    pub restructured: PathBuf,
    /// hadamard, uniform, or both.
    #[arg(long, default_value = "both")]
    pub strategy: String,
    /// Seed shared by every embedding in the comparison.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rows of the distance matrix to hold in memory at once.
    #[arg(long, default_value_t = 32)]
    pub batch_rows: usize,
    /// Directory to write comparison.json and manifest.json into.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
struct TreeSummary {
    num_nodes: usize,
    num_edges: usize,
    depth: usize,
    num_leaves: usize,
    max_degree: usize,
    avg_branching_factor: f64,
}

impl TreeSummary {
    fn of(tree: &Hierarchy) -> Self {
        let p = tree.properties();
        TreeSummary {
            num_nodes: p.num_nodes,
            num_edges: p.num_edges,
            depth: p.depth,
            num_leaves: p.num_leaves,
            max_degree: p.max_degree,
            avg_branching_factor: p.avg_branching_factor,
        }
    }
}

#[derive(Debug, Serialize)]
struct ComparisonDoc {
    original: String,
    restructured: String,
    dimension: usize,
    tau: f64,
    epsilon: f64,
    seed: u64,
    batch_rows: usize,
    original_properties: TreeSummary,
    restructured_properties: TreeSummary,
    rows: Vec<MetricsRow>,
    diff: StructuralDiff,
}

/// The shared embedding configuration for a before/after pair: wide enough
/// for the bushier tree, short enough edges for the deeper one.
pub fn shared_config(a: &Hierarchy, b: &Hierarchy) -> Result<EmbeddingConfig, CommandError> {
    let pa = a.properties();
    let pb = b.properties();
    let dimension = select_dimension(pa.max_degree.max(pb.max_degree).max(1));
    let depth = pa.depth.max(pb.depth).max(1) as u32;
    EmbeddingConfig::new(dimension, compute_tau(depth, f64::EPSILON), f64::EPSILON, depth)
        .map_err(|e| CommandError::Input(e.to_string()))
}

/// Runs the comparison and returns the document (library entry point shared
/// with the ablation sweep and the test suites).
pub fn compare_trees(
    original: &Hierarchy,
    candidate: &Hierarchy,
    strategies: &[Strategy],
    seed: u64,
    batch_rows: usize,
) -> Result<(Vec<MetricsRow>, StructuralDiff, EmbeddingConfig), CommandError> {
    let config = shared_config(original, candidate)?;
    let mut rows = Vec::new();
    for &strategy in strategies {
        for (label, tree) in [("original", original), ("restructured", candidate)] {
            let report = embed_and_evaluate(tree, &config, strategy, seed, batch_rows)?;
            rows.push(MetricsRow::new(label, strategy, &report));
        }
    }
    Ok((rows, structural_diff(original, candidate), config))
}

pub fn run(args: &CompareArgs) -> Result<String, CommandError> {
    if is_graph_dict(&args.restructured) {
        return Err(CommandError::Input(format!(
            "{}: the restructured candidate must be in indented text format",
            args.restructured.display()
        )));
    }
    let strategies = parse_strategy_selection(&args.strategy)?;
    let original = load_tree(&args.original)?;
    let candidate_text = read_file(&args.restructured)?;

    let report = validate_candidate(&original, &candidate_text);
    if !report.passed() {
        let mut writer = ManifestWriter::begin(
            &args.out,
            "compare",
            &[&args.original, &args.restructured],
            ConfigSnapshot::default(),
        )?;
        writer.write_json("validation.json", &report)?;
        writer.finish()?;
        let failures: Vec<String> = report
            .failures()
            .into_iter()
            .map(|f| format!("criterion {} ({}): {}", f.index, f.name, f.evidence))
            .collect();
        return Err(CommandError::Validation(format!(
            "restructured hierarchy failed validation:\n  {}",
            failures.join("\n  ")
        )));
    }
    let candidate = Hierarchy::parse_text(&candidate_text)
        .map_err(|e| CommandError::Input(format!("{}: {e}", args.restructured.display())))?;

    let batch_rows = args.batch_rows.max(1);
    let (rows, diff, config) =
        compare_trees(&original, &candidate, &strategies, args.seed, batch_rows)?;

    let doc = ComparisonDoc {
        original: args.original.display().to_string(),
        restructured: args.restructured.display().to_string(),
        dimension: config.dimension,
        tau: config.tau,
        epsilon: config.epsilon,
        seed: args.seed,
        batch_rows,
        original_properties: TreeSummary::of(&original),
        restructured_properties: TreeSummary::of(&candidate),
        rows,
        diff,
    };

    let mut writer = ManifestWriter::begin(
        &args.out,
        "compare",
        &[&args.original, &args.restructured],
        ConfigSnapshot {
            dimension: Some(config.dimension),
            tau: Some(config.tau),
            epsilon: Some(config.epsilon),
            max_path_length: Some(config.max_path_length),
            strategy: Some(args.strategy.clone()),
            seed: Some(args.seed),
            batch_rows: Some(batch_rows),
            ..ConfigSnapshot::default()
        },
    )?;
    writer.write_json("comparison.json", &doc)?;
    writer.finish()?;

    let mut lines = vec![format!(
        "shared dimension {}  tau {:.6}  seed {}",
        doc.dimension, doc.tau, doc.seed
    )];
    lines.push(format!(
        "{:<14} {:<18} {:>10} {:>10}",
        "tree", "strategy", "D_avg", "D_wc"
    ));
    for row in &doc.rows {
        lines.push(format!(
            "{:<14} {:<18} {:>10.6} {:>10.6}",
            row.tree, row.strategy, row.d_avg, row.d_wc
        ));
    }
    lines.push(format!(
        "diff: removed {} node(s), promoted {} node(s), depth {:+}, avg branching factor {:+.1}, leaves {:+}",
        doc.diff.removed_nodes.len(),
        doc.diff.promoted_nodes.len(),
        doc.diff.depth_delta,
        doc.diff.avg_bf_delta,
        doc.diff.leaf_delta
    ));
    Ok(lines.join("\n"))
}
