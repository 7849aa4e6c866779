//! `workbench validate`: run the four-criterion gate on a candidate file
//! against the original hierarchy, without touching any embedding.

use clap::Args;
use restructure::validate_candidate;
use serde::Serialize;
use std::path::PathBuf;

use crate::input::{load_tree, read_file};
use crate::manifest::{ConfigSnapshot, ManifestWriter};
use crate::CommandError;

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// The hierarchy the candidate claims to restructure.
    pub original: PathBuf,
    /// Candidate hierarchy in indented text format.
    pub candidate: PathBuf,
    /// Directory to write validation.json and manifest.json into.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct ValidateDoc {
    passed: bool,
    structurally_different: bool,
    leaves_retained: bool,
    no_hallucination: bool,
    format_ok: bool,
    failures: Vec<serde_json::Value>,
}

pub fn run(args: &ValidateArgs) -> Result<String, CommandError> {
    let original = load_tree(&args.original)?;
    let candidate_text = read_file(&args.candidate)?;
    let report = validate_candidate(&original, &candidate_text);

    let failures = report
        .failures()
        .into_iter()
        .map(|f| {
            serde_json::json!({
                "index": f.index,
                "name": f.name,
                "evidence": f.evidence,
            })
        })
        .collect();
    let doc = ValidateDoc {
        passed: report.passed(),
        structurally_different: report.structurally_different,
        leaves_retained: report.leaves_retained,
        no_hallucination: report.no_hallucination,
        format_ok: report.format_ok,
        failures,
    };

    if let Some(out) = &args.out {
        let mut writer = ManifestWriter::begin(
            out,
            "validate",
            &[&args.original, &args.candidate],
            ConfigSnapshot::default(),
        )?;
        writer.write_json("validation.json", &doc)?;
        writer.finish()?;
    }

    let mut lines = vec![format!(
        "validation: {}",
        if doc.passed { "pass" } else { "fail" }
    )];
    for (flag, label) in [
        (doc.structurally_different, "1 structurally different"),
        (doc.leaves_retained, "2 leaves retained"),
        (doc.no_hallucination, "3 no invented nodes"),
        (doc.format_ok, "4 format preserved"),
    ] {
        lines.push(format!(
            "  criterion {label}: {}",
            if flag { "pass" } else { "fail" }
        ));
    }
    for failure in report.failures() {
        lines.push(format!("  evidence ({}): {}", failure.index, failure.evidence));
    }

    if doc.passed {
        Ok(lines.join("\n"))
    } else {
        Err(CommandError::Validation(lines.join("\n")))
    }
}
