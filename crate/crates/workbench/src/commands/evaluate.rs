//! `workbench evaluate`: distortion metrics for an embedding file against
//! the hierarchy it was built from.

use clap::Args;
use distortion::DistortionReport;
use embedders::read_embedding;
use serde::Serialize;
use std::path::PathBuf;

use crate::input::{load_tree, read_file};
use crate::manifest::{ConfigSnapshot, ManifestWriter};
use crate::CommandError;

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Hierarchy file the embedding belongs to.
    pub tree: PathBuf,
    /// Embedding file produced by `workbench embed`.
    pub embedding: PathBuf,
    /// Rows of the distance matrix to hold in memory at once.
    #[arg(long, default_value_t = 32)]
    pub batch_rows: usize,
    /// Directory to write report.json and manifest.json into.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct ReportDoc<'a> {
    tree: String,
    embedding: String,
    strategy: String,
    seed: u64,
    dimension: usize,
    tau: f64,
    #[serde(flatten)]
    report: &'a DistortionReport,
}

pub fn run(args: &EvaluateArgs) -> Result<String, CommandError> {
    let tree = load_tree(&args.tree)?;
    let embedding_text = read_file(&args.embedding)?;
    let embedding = read_embedding(&embedding_text)
        .map_err(|e| CommandError::Input(format!("{}: {e}", args.embedding.display())))?;

    let report = distortion::evaluate(&embedding, &tree, args.batch_rows.max(1))
        .map_err(|e| CommandError::Input(e.to_string()))?;

    let doc = ReportDoc {
        tree: args.tree.display().to_string(),
        embedding: args.embedding.display().to_string(),
        strategy: embedding.strategy().tag().to_string(),
        seed: embedding.seed(),
        dimension: embedding.config().dimension,
        tau: embedding.config().tau,
        report: &report,
    };

    if let Some(out) = &args.out {
        let mut writer = ManifestWriter::begin(
            out,
            "evaluate",
            &[&args.tree, &args.embedding],
            ConfigSnapshot {
                dimension: Some(embedding.config().dimension),
                tau: Some(embedding.config().tau),
                epsilon: Some(embedding.config().epsilon),
                strategy: Some(embedding.strategy().tag().to_string()),
                seed: Some(embedding.seed()),
                batch_rows: Some(args.batch_rows.max(1)),
                ..ConfigSnapshot::default()
            },
        )?;
        writer.write_json("report.json", &doc)?;
        writer.finish()?;
    }

    Ok(format!(
        "D_avg {:.6}  D_wc {:.6}  (max stretch {:.6}, min stretch {:.6}, {} nodes, {} pairs)",
        report.d_avg,
        report.d_wc,
        report.max_stretch,
        report.min_stretch,
        report.num_nodes,
        report.num_pairs
    ))
}
