//! Hierarchy restructuring toolkit.
//!
//! Three cooperating pieces:
//!
//! * **Prompt assembly** ([`assemble_prompt`]) — builds the instruction
//!   text sent to a language model from a fixed preamble, the selected
//!   recommendation paragraphs, and the serialized hierarchy.
//! * **Candidate validation** ([`validate_candidate`]) — checks a
//!   proposed replacement hierarchy against the four acceptance
//!   criteria (structural change, leaf retention, no invented labels,
//!   strict format).
//! * **Heuristic baseline** ([`heuristic_restructure`]) — a
//!   deterministic, LLM-free restructurer that collapses single-child
//!   chains and resolves multiple inheritance.
//!
//! Everything here is a pure function over immutable trees and is safe
//! to call concurrently.

#![forbid(unsafe_code)]

mod correlation;
mod diff;
mod heuristic;
mod prompt;
mod validate;

pub use correlation::bf_distortion_correlation;
pub use diff::structural_diff;
pub use heuristic::{heuristic_restructure, heuristic_restructure_graph};
pub use prompt::{
    assemble_prompt, PREAMBLE, REC_BALANCE, REC_COMPLEXITY, REC_SINGLE_INHERITANCE, REC_WIDTH,
};
pub use validate::{validate_candidate, CriterionFailure, ValidationDetails, ValidationReport};

use hierarchy_core::Hierarchy;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors surfaced by the restructuring toolkit.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum RestructureError {
    /// `assemble_prompt` was called with every recommendation flag off.
    #[error("recommendation set is empty: enable at least one of r1..r4")]
    EmptyRecommendationSet,
    /// Correlation is undefined when either column of the records has
    /// zero variance.
    #[error("correlation undefined: {column} deltas have zero variance")]
    DegenerateVariance {
        /// Which input column was constant ("branching-factor" or
        /// "distortion").
        column: &'static str,
    },
}

/// Which of the four restructuring recommendations are in play.
///
/// R1 and R4 drive concrete transformations; R2 and R3 are permissions
/// (they relax constraints the model might otherwise respect) and
/// contribute prompt text only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecommendationSet {
    /// R1 — prefer wide hierarchies with high branching factors.
    pub r1_width: bool,
    /// R2 — subtree balance may be ignored.
    pub r2_balance: bool,
    /// R3 — extra nodes are acceptable; sparsity need not be enforced.
    pub r3_size: bool,
    /// R4 — avoid multiple inheritance; keep single parents.
    pub r4_single_inheritance: bool,
}

impl RecommendationSet {
    /// All four recommendations enabled.
    pub fn all() -> Self {
        Self {
            r1_width: true,
            r2_balance: true,
            r3_size: true,
            r4_single_inheritance: true,
        }
    }

    /// No recommendations enabled (invalid for prompting; useful as a
    /// builder seed).
    pub fn none() -> Self {
        Self {
            r1_width: false,
            r2_balance: false,
            r3_size: false,
            r4_single_inheritance: false,
        }
    }

    /// True when at least one flag is set.
    pub fn any(&self) -> bool {
        self.r1_width || self.r2_balance || self.r3_size || self.r4_single_inheritance
    }

    /// Parses a comma-separated flag list such as `"r1,r4"` or `"all"`.
    /// Flags are case-insensitive and may appear in any order.
    pub fn from_csv(spec: &str) -> Result<Self, String> {
        if spec.trim().eq_ignore_ascii_case("all") {
            return Ok(Self::all());
        }
        let mut set = Self::none();
        for raw in spec.split(',') {
            let flag = raw.trim().to_ascii_lowercase();
            match flag.as_str() {
                "" => continue,
                "r1" | "width" => set.r1_width = true,
                "r2" | "balance" => set.r2_balance = true,
                "r3" | "size" => set.r3_size = true,
                "r4" | "single-inheritance" => set.r4_single_inheritance = true,
                other => {
                    return Err(format!(
                        "unknown recommendation flag '{other}' (expected r1, r2, r3, r4, or all)"
                    ))
                }
            }
        }
        Ok(set)
    }

    /// Short labels of the enabled flags, in R1..R4 order.
    pub fn enabled_labels(&self) -> Vec<&'static str> {
        let mut labels = Vec::new();
        if self.r1_width {
            labels.push("r1");
        }
        if self.r2_balance {
            labels.push("r2");
        }
        if self.r3_size {
            labels.push("r3");
        }
        if self.r4_single_inheritance {
            labels.push("r4");
        }
        labels
    }
}

impl Default for RecommendationSet {
    /// Defaults to all four recommendations, the strongest variant.
    fn default() -> Self {
        Self::all()
    }
}

/// How a restructuring attempt ended: the surviving candidate (when
/// validation passed), the final validation report, any captured
/// explanation text, the structural delta, and how much prompting it
/// took to get there.
#[derive(Debug, Clone)]
pub struct RestructureOutcome {
    /// The accepted hierarchy; `None` when every attempt failed
    /// validation.
    pub candidate: Option<Hierarchy>,
    /// Validation report for the final candidate examined.
    pub validation: ValidationReport,
    /// Explanation text captured alongside the candidate (prose from
    /// the model, or the heuristic's change log).
    pub explanation: String,
    /// Structural comparison against the original; present exactly when
    /// `candidate` is.
    pub diff: Option<StructuralDiff>,
    /// How many follow-up and restart prompts were consumed.
    pub attempts: AttemptCounts,
}

/// Prompting effort consumed by a restructure session.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptCounts {
    /// Follow-up repair prompts issued within conversations.
    pub follow_ups: u32,
    /// Fresh-conversation restarts issued.
    pub restarts: u32,
}

/// Node-level and summary-level differences between an original
/// hierarchy and its restructured counterpart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuralDiff {
    /// Labels present in the original but absent from the restructured
    /// tree, in original pre-order.
    pub removed_nodes: Vec<String>,
    /// Labels present in both trees whose new parent sits shallower
    /// than their old parent, in original pre-order.
    pub promoted_nodes: Vec<String>,
    /// `restructured.depth - original.depth`.
    pub depth_delta: i64,
    /// `restructured.avg_branching_factor - original.avg_branching_factor`
    /// (both at the pipeline's one-decimal resolution).
    pub avg_bf_delta: f64,
    /// `restructured.num_leaves - original.num_leaves`.
    pub leaf_delta: i64,
}
