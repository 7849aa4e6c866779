//! `workbench embed`: construct a Poincare-ball embedding and persist it.

use clap::Args;
use embedders::write_embedding;
use std::path::PathBuf;

use crate::commands::parse_strategy;
use crate::input::load_tree;
use crate::manifest::{ConfigSnapshot, ManifestWriter, MANIFEST_FILE};
use crate::CommandError;

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// Hierarchy file to embed.
    pub input: PathBuf,
    /// Direction generator: hadamard or uniform.
    #[arg(long, default_value = "hadamard")]
    pub strategy: String,
    /// Ball dimension: `auto` picks from the maximum degree.
    #[arg(long, default_value = "auto")]
    pub dim: String,
    /// Seed for the uniform generator (recorded either way).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory to write embedding.txt and manifest.json into.
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_dim(raw: &str) -> Result<Option<usize>, CommandError> {
    if raw == "auto" {
        return Ok(None);
    }
    raw.parse::<usize>().map(Some).map_err(|_| {
        CommandError::Input(format!("--dim must be `auto` or a positive integer, got {raw:?}"))
    })
}

pub fn run(args: &EmbedArgs) -> Result<String, CommandError> {
    let strategy = parse_strategy(&args.strategy)?;
    let tree = load_tree(&args.input)?;
    let config = crate::commands::auto_config(&tree, parse_dim(&args.dim)?)?;

    let embedding = embedders::embed(&tree, &config, strategy, args.seed)
        .map_err(|e| CommandError::Input(e.to_string()))?;
    let text = write_embedding(&embedding, &[("manifest", MANIFEST_FILE)])
        .map_err(|e| CommandError::Input(e.to_string()))?;

    let mut writer = ManifestWriter::begin(
        &args.out,
        "embed",
        &[&args.input],
        ConfigSnapshot {
            dimension: Some(config.dimension),
            tau: Some(config.tau),
            epsilon: Some(config.epsilon),
            max_path_length: Some(config.max_path_length),
            strategy: Some(strategy.tag().to_string()),
            seed: Some(args.seed),
            ..ConfigSnapshot::default()
        },
    )?;
    let path = writer.write_text("embedding.txt", &text)?;
    writer.finish()?;

    Ok(format!(
        "embedded {} nodes into dimension {} (tau {:.6}, strategy {}) -> {}",
        embedding.len(),
        config.dimension,
        config.tau,
        strategy,
        path.display()
    ))
}
