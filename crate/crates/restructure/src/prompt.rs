//! Prompt assembly for LLM-driven restructuring.
//!
//! The instruction text lives in `assets/` as plain-text paragraphs so
//! the wording ships with the binary unchanged; this module only
//! concatenates the pieces in a fixed order.

use crate::{RecommendationSet, RestructureError};

/// Opening request plus the lead-in sentence for the recommendation
/// list. The `<Hierarchy.txt>` placeholder refers to the attached
/// hierarchy, which is appended after the recommendations.
pub const PREAMBLE: &str = include_str!("../assets/preamble.txt");

/// R1 — design hierarchies for width.
pub const REC_WIDTH: &str = include_str!("../assets/rec_width.txt");

/// R2 — do not worry about balance.
pub const REC_BALANCE: &str = include_str!("../assets/rec_balance.txt");

/// R3 — additional node complexity is acceptable.
pub const REC_COMPLEXITY: &str = include_str!("../assets/rec_complexity.txt");

/// R4 — avoid multiple inheritance.
pub const REC_SINGLE_INHERITANCE: &str = include_str!("../assets/rec_single_inheritance.txt");

/// Builds the restructuring prompt: preamble, the enabled
/// recommendation paragraphs in R1..R4 order, then the hierarchy text.
/// Byte-stable given the same inputs.
///
/// Errors with [`RestructureError::EmptyRecommendationSet`] when no
/// flag is enabled — a prompt with zero recommendations would ask the
/// model to change nothing.
pub fn assemble_prompt(
    h_text: &str,
    recs: &RecommendationSet,
) -> Result<String, RestructureError> {
    if !recs.any() {
        return Err(RestructureError::EmptyRecommendationSet);
    }
    let mut prompt = String::with_capacity(PREAMBLE.len() + h_text.len() + 2048);
    prompt.push_str(PREAMBLE);
    let selected: [(bool, &str); 4] = [
        (recs.r1_width, REC_WIDTH),
        (recs.r2_balance, REC_BALANCE),
        (recs.r3_size, REC_COMPLEXITY),
        (recs.r4_single_inheritance, REC_SINGLE_INHERITANCE),
    ];
    for (enabled, paragraph) in selected {
        if enabled {
            prompt.push('\n');
            prompt.push_str(paragraph);
        }
    }
    prompt.push('\n');
    prompt.push_str(h_text);
    if !h_text.ends_with('\n') {
        prompt.push('\n');
    }
    Ok(prompt)
}
