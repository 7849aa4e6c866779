//! One module per subcommand, plus the helpers they share.

pub mod ablate;
pub mod analyze;
pub mod compare;
pub mod embed;
pub mod evaluate;
pub mod export_viz;
pub mod restructure;
pub mod validate;

use distortion::DistortionReport;
use embedders::Strategy;
use hierarchy_core::Hierarchy;
use poincare_geometry::{select_dimension, EmbeddingConfig};
use serde::Serialize;

use crate::CommandError;

/// Parses a `--strategy` value; `uniform` is the short spelling of the
/// repulsion-optimized generator.
pub fn parse_strategy(tag: &str) -> Result<Strategy, CommandError> {
    match tag {
        "uniform" => Ok(Strategy::OptimizedUniform),
        other => Strategy::from_tag(other).ok_or_else(|| {
            CommandError::Input(format!(
                "unknown strategy {other:?}; expected hadamard, uniform, or optimized-uniform"
            ))
        }),
    }
}

/// Expands a `--strategy` value that may also be `both`.
pub fn parse_strategy_selection(tag: &str) -> Result<Vec<Strategy>, CommandError> {
    if tag == "both" {
        Ok(vec![Strategy::Hadamard, Strategy::OptimizedUniform])
    } else {
        Ok(vec![parse_strategy(tag)?])
    }
}

/// The embedding configuration a tree gets on its own: dimension from its
/// maximum degree (unless overridden) and edge length from its depth at
/// double precision.
pub fn auto_config(
    tree: &Hierarchy,
    dim_override: Option<usize>,
) -> Result<EmbeddingConfig, CommandError> {
    let props = tree.properties();
    let dimension = dim_override.unwrap_or_else(|| select_dimension(props.max_degree.max(1)));
    EmbeddingConfig::for_tree_depth(props.depth, dimension)
        .map_err(|e| CommandError::Input(e.to_string()))
}

/// One distortion measurement in a comparison or ablation grid.
#[derive(Debug, Clone, Serialize)]
pub struct MetricsRow {
    pub tree: String,
    pub strategy: String,
    pub d_avg: f64,
    pub d_wc: f64,
    pub max_stretch: f64,
    pub min_stretch: f64,
    pub num_nodes: usize,
    pub num_pairs: u64,
}

impl MetricsRow {
    pub fn new(tree: &str, strategy: Strategy, report: &DistortionReport) -> Self {
        MetricsRow {
            tree: tree.to_string(),
            strategy: strategy.tag().to_string(),
            d_avg: report.d_avg,
            d_wc: report.d_wc,
            max_stretch: report.max_stretch,
            min_stretch: report.min_stretch,
            num_nodes: report.num_nodes,
            num_pairs: report.num_pairs,
        }
    }
}

/// Embeds and evaluates one tree under one configuration.
pub fn embed_and_evaluate(
    tree: &Hierarchy,
    config: &EmbeddingConfig,
    strategy: Strategy,
    seed: u64,
    batch_rows: usize,
) -> Result<DistortionReport, CommandError> {
    let emb = embedders::embed(tree, config, strategy, seed)
        .map_err(|e| CommandError::Input(e.to_string()))?;
    distortion::evaluate(&emb, tree, batch_rows).map_err(|e| CommandError::Input(e.to_string()))
}
