//! `workbench ablate`: sweep the recommendation subsets and report how each
//! one moves distortion, next to a no-restructure baseline.
//!
//! The grid has seven rows per strategy: the baseline plus the six studied
//! subsets {r1}, {r2}, {r3}, {r1,r2,r3}, {r2,r3,r4}, and all four.

use clap::Args;
use hierarchy_core::Hierarchy;
use restructure::{validate_candidate, RecommendationSet};
use serde::Serialize;
use std::path::PathBuf;

use crate::commands::compare::shared_config;
use crate::commands::restructure::map_gateway_error;
use crate::commands::{auto_config, embed_and_evaluate, parse_strategy_selection};
use crate::input::load_tree;
use crate::manifest::{ConfigSnapshot, ManifestWriter};
use crate::CommandError;

/// The studied subsets, in grid order after the baseline.
pub const SUBSET_LABELS: [&str; 6] = ["r1", "r2", "r3", "r1,r2,r3", "r2,r3,r4", "all"];

#[derive(Debug, Args)]
pub struct AblateArgs {
    /// Hierarchy file to sweep.
    pub input: PathBuf,
    /// `heuristic` or `llm` (reads LLM_API_KEY, LLM_BASE_URL, LLM_MODEL).
    #[arg(long, default_value = "heuristic")]
    pub engine: String,
    /// Subset grid to run; only the published six-subset grid exists.
    #[arg(long, default_value = "table2", value_parser = ["table2"])]
    pub grid: String,
    /// hadamard, uniform, or both.
    #[arg(long, default_value = "both")]
    pub strategy: String,
    /// Seed shared by every embedding in the sweep.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rows of the distance matrix to hold in memory at once.
    #[arg(long, default_value_t = 32)]
    pub batch_rows: usize,
    /// Directory to write ablation.json and manifest.json into.
    #[arg(long)]
    pub out: PathBuf,
}

/// One grid cell: a subset evaluated under one strategy.
#[derive(Debug, Clone, Serialize)]
pub struct AblateRow {
    pub subset: String,
    pub strategy: String,
    pub dimension: usize,
    pub tau: f64,
    pub d_avg: f64,
    pub d_wc: f64,
    pub max_stretch: f64,
    pub min_stretch: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Serialize)]
struct AblationDoc {
    input: String,
    engine: String,
    grid: String,
    seed: u64,
    batch_rows: usize,
    rows: Vec<AblateRow>,
}

/// A restructured candidate for one subset, or the reason there is none.
enum SubsetCandidate {
    Unchanged,
    Changed(Hierarchy),
}

fn candidate_for_subset(
    tree: &Hierarchy,
    engine: &str,
    recs: &RecommendationSet,
) -> Result<SubsetCandidate, CommandError> {
    let candidate = match engine {
        "heuristic" => restructure::heuristic_restructure(tree, recs).0,
        "llm" => {
            let config =
                llm_gateway::LlmConfig::from_env().map_err(|e| CommandError::Input(e.to_string()))?;
            let outcome = llm_gateway::restructure_session(&config, tree, recs)
                .map_err(|e| map_gateway_error(&e))?;
            outcome.candidate.expect("passing outcome has a candidate")
        }
        other => {
            return Err(CommandError::Input(format!(
                "unknown engine {other:?}; expected heuristic or llm"
            )))
        }
    };
    if validate_candidate(tree, &candidate.serialize_text()).structurally_different {
        Ok(SubsetCandidate::Changed(candidate))
    } else {
        Ok(SubsetCandidate::Unchanged)
    }
}

pub fn run(args: &AblateArgs) -> Result<String, CommandError> {
    let strategies = parse_strategy_selection(&args.strategy)?;
    let tree = load_tree(&args.input)?;
    let batch_rows = args.batch_rows.max(1);

    let mut candidates: Vec<(String, SubsetCandidate)> = Vec::new();
    for label in SUBSET_LABELS {
        let recs = RecommendationSet::from_csv(label)
            .expect("grid labels parse as recommendation sets");
        candidates.push((label.to_string(), candidate_for_subset(&tree, &args.engine, &recs)?));
    }

    let baseline_config = auto_config(&tree, None)?;
    let mut rows: Vec<AblateRow> = Vec::new();
    for &strategy in &strategies {
        let baseline =
            embed_and_evaluate(&tree, &baseline_config, strategy, args.seed, batch_rows)?;
        let baseline_index = rows.len();
        rows.push(AblateRow {
            subset: "baseline".to_string(),
            strategy: strategy.tag().to_string(),
            dimension: baseline_config.dimension,
            tau: baseline_config.tau,
            d_avg: baseline.d_avg,
            d_wc: baseline.d_wc,
            max_stretch: baseline.max_stretch,
            min_stretch: baseline.min_stretch,
            note: None,
        });
        for (label, candidate) in &candidates {
            rows.push(match candidate {
                SubsetCandidate::Unchanged => {
                    // Nothing fired, so the subset's tree is the original:
                    // the baseline measurement applies verbatim.
                    let mut row = rows[baseline_index].clone();
                    row.subset = label.clone();
                    row.note = Some("no transformation".to_string());
                    row
                }
                SubsetCandidate::Changed(candidate) => {
                    let config = shared_config(&tree, candidate)?;
                    let report =
                        embed_and_evaluate(candidate, &config, strategy, args.seed, batch_rows)?;
                    AblateRow {
                        subset: label.clone(),
                        strategy: strategy.tag().to_string(),
                        dimension: config.dimension,
                        tau: config.tau,
                        d_avg: report.d_avg,
                        d_wc: report.d_wc,
                        max_stretch: report.max_stretch,
                        min_stretch: report.min_stretch,
                        note: None,
                    }
                }
            });
        }
    }

    let doc = AblationDoc {
        input: args.input.display().to_string(),
        engine: args.engine.clone(),
        grid: args.grid.clone(),
        seed: args.seed,
        batch_rows,
        rows,
    };

    let mut writer = ManifestWriter::begin(
        &args.out,
        "ablate",
        &[&args.input],
        ConfigSnapshot {
            engine: Some(args.engine.clone()),
            grid: Some(args.grid.clone()),
            strategy: Some(args.strategy.clone()),
            seed: Some(args.seed),
            batch_rows: Some(batch_rows),
            epsilon: Some(f64::EPSILON),
            ..ConfigSnapshot::default()
        },
    )?;
    writer.write_json("ablation.json", &doc)?;
    writer.finish()?;

    let mut lines = vec![format!(
        "{:<10} {:<18} {:>4} {:>9} {:>10} {:>10}  {}",
        "subset", "strategy", "dim", "tau", "D_avg", "D_wc", "note"
    )];
    for row in &doc.rows {
        lines.push(format!(
            "{:<10} {:<18} {:>4} {:>9.6} {:>10.6} {:>10.6}  {}",
            row.subset,
            row.strategy,
            row.dimension,
            row.tau,
            row.d_avg,
            row.d_wc,
            row.note.as_deref().unwrap_or("-")
        ));
    }
    Ok(lines.join("\n"))
}
