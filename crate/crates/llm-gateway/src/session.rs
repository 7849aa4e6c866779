//! The restructure → validate → follow-up → restart loop.

use hierarchy_core::Hierarchy;
use restructure::{
    assemble_prompt, structural_diff, validate_candidate, AttemptCounts, RecommendationSet,
    RestructureOutcome, ValidationReport,
};

use crate::client::{request_completion, ChatMessage};
use crate::extract::{extract_hierarchy, prose_without_block};
use crate::transcript::{ExtractedBlock, SessionTranscript};
use crate::{GatewayError, LlmConfig};

/// Builds the repair prompt for a failed validation: one sentence per
/// failed criterion, naming it and the evidence, then the fixed
/// closing instruction.
fn follow_up_message(report: &ValidationReport) -> String {
    let mut message = String::new();
    for failure in report.failures() {
        message.push_str(&format!(
            "The previous hierarchy failed criterion {}: {}. ",
            failure.index, failure.evidence
        ));
    }
    message.push_str("Please output the full corrected hierarchy in the same format.");
    message
}

/// Runs a full restructuring session against the configured service.
///
/// Each conversation starts from the assembled prompt; every reply is
/// mined for its largest hierarchy block, which is re-validated from
/// scratch (extraction output is never trusted). A failed validation
/// triggers a follow-up naming exactly the failed criteria, up to
/// `max_follow_ups` per conversation; when a conversation's budget is
/// spent the whole conversation restarts from the top, up to
/// `max_restarts` times. With temperature 0 and a deterministic server
/// the session is fully reproducible.
///
/// On success the outcome carries the candidate, its validation
/// report, the structural diff, and all non-hierarchy assistant prose
/// as the explanation. When every budget is spent,
/// [`GatewayError::ExhaustedAttempts`] carries the complete transcript
/// and the final report.
pub fn restructure_session(
    config: &LlmConfig,
    original: &Hierarchy,
    recs: &RecommendationSet,
) -> Result<RestructureOutcome, GatewayError> {
    config.validate()?;
    let initial_prompt = assemble_prompt(&original.serialize_text(), recs)?;
    let mut transcript = SessionTranscript::new();
    let mut attempts = AttemptCounts::default();
    let mut last_validation: Option<ValidationReport> = None;

    for restart in 0..=config.max_restarts {
        if restart > 0 {
            attempts.restarts += 1;
        }
        let mut conversation = vec![ChatMessage::user(initial_prompt.clone())];
        let mut follow_ups_left = config.max_follow_ups;

        loop {
            let reply = request_completion(config, &conversation, &mut transcript)?;
            conversation.push(ChatMessage::assistant(reply.content.clone()));
            let turn_index = transcript.turns.len() - 1;

            let block = extract_hierarchy(&reply.content);
            if let Some(text) = &block {
                transcript.hierarchy_blocks.push(ExtractedBlock {
                    turn_index,
                    content: text.clone(),
                });
            }
            let prose = prose_without_block(&reply.content, block.as_deref());
            if !prose.is_empty() {
                transcript.explanation_blocks.push(ExtractedBlock {
                    turn_index,
                    content: prose,
                });
            }

            // Re-validate from the raw block text; an absent block is
            // validated as empty so the report carries real evidence.
            let candidate_text = block.unwrap_or_default();
            let report = validate_candidate(original, &candidate_text);
            if report.passed() {
                let candidate = Hierarchy::parse_text(&candidate_text)
                    .expect("format criterion passed, so the strict grammar accepts it");
                let diff = structural_diff(original, &candidate);
                return Ok(RestructureOutcome {
                    candidate: Some(candidate),
                    validation: report,
                    explanation: transcript.joined_explanations(),
                    diff: Some(diff),
                    attempts,
                });
            }

            let message = follow_up_message(&report);
            last_validation = Some(report);
            if follow_ups_left == 0 {
                break; // conversation budget spent; restart or exhaust
            }
            follow_ups_left -= 1;
            attempts.follow_ups += 1;
            conversation.push(ChatMessage::user(message));
        }
    }

    Err(GatewayError::ExhaustedAttempts {
        transcript: Box::new(transcript),
        validation: Box::new(last_validation.expect("at least one reply was validated")),
        attempts,
    })
}
