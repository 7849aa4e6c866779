//! End-to-end gateway scenarios against the scripted in-process mock
//! server. No external network is touched anywhere in this file.

use std::time::Duration;

use hierarchy_core::Hierarchy;
use llm_gateway::mock::{MockReply, MockServer};
use llm_gateway::{
    request_completion, restructure_session, ChatMessage, GatewayError, LlmConfig, Role,
    SessionTranscript,
};
use restructure::RecommendationSet;

const KEY_ENV: &str = "LLM_GATEWAY_TEST_KEY";

/// Config pointed at a mock server, with fast retry backoff.
fn test_config(server: &MockServer) -> LlmConfig {
    std::env::set_var(KEY_ENV, "test-key");
    let mut config = LlmConfig::new(server.endpoint(), "mock-model");
    config.api_key_env = KEY_ENV.to_string();
    config.retry_base_ms = 10;
    config
}

fn original_chain() -> Hierarchy {
    Hierarchy::parse_text("r\n  b\n    c\n      d\n").unwrap()
}

#[test]
fn immediate_pass_consumes_no_follow_ups_or_restarts() {
    let reply = "I removed the chain nodes to widen the tree.\n```\nr\n  d\n```\nDepth fell from 3 to 1.";
    let server = MockServer::start(vec![MockReply::chat(reply)]).unwrap();
    let config = test_config(&server);

    let outcome =
        restructure_session(&config, &original_chain(), &RecommendationSet::all()).unwrap();

    assert_eq!(outcome.attempts.follow_ups, 0);
    assert_eq!(outcome.attempts.restarts, 0);
    let candidate = outcome.candidate.expect("passing outcome has a candidate");
    assert_eq!(candidate.serialize_text(), "r\n  d\n");
    assert!(outcome.validation.passed());
    let diff = outcome.diff.expect("passing outcome has a diff");
    assert_eq!(diff.removed_nodes, vec!["b".to_string(), "c".to_string()]);
    assert_eq!(diff.depth_delta, -2);
    assert!(outcome.explanation.contains("widen the tree"));
    assert!(outcome.explanation.contains("Depth fell"));
    assert_eq!(server.request_count(), 1);

    let body = &server.request_bodies()[0];
    assert!(body.contains("Design hierarchies for width"));
    assert!(body.contains("Avoid multiple inheritance"));
    assert!(body.contains("\"temperature\":0"), "body: {body}");
    assert!(body.contains("mock-model"));
}

#[test]
fn dropped_leaf_is_repaired_after_one_follow_up_naming_it() {
    let original = Hierarchy::parse_text("r\n  a\n    leafx\n  b\n").unwrap();
    let server = MockServer::start(vec![
        MockReply::chat("Here you go:\n```\nr\n  a\n  b\n```"),
        MockReply::chat("Apologies — restored the missing leaf:\n```\nr\n  a\n  leafx\n  b\n```"),
    ])
    .unwrap();
    let config = test_config(&server);

    let outcome = restructure_session(&config, &original, &RecommendationSet::all()).unwrap();

    assert_eq!(outcome.attempts.follow_ups, 1);
    assert_eq!(outcome.attempts.restarts, 0);
    let candidate = outcome.candidate.unwrap();
    assert_eq!(candidate.serialize_text(), "r\n  a\n  leafx\n  b\n");
    assert_eq!(server.request_count(), 2);

    // The second request carries the whole conversation: prompt, bad
    // reply, follow-up. The follow-up names criterion 2 and the leaf.
    let second: serde_json::Value =
        serde_json::from_str(&server.request_bodies()[1]).unwrap();
    let messages = second["messages"].as_array().unwrap();
    assert_eq!(messages.len(), 3);
    let roles: Vec<&str> = messages.iter().map(|m| m["role"].as_str().unwrap()).collect();
    assert_eq!(roles, vec!["user", "assistant", "user"]);
    assert!(messages[1]["content"].as_str().unwrap().contains("Here you go"));
    let follow_up = messages[2]["content"].as_str().unwrap();
    assert!(follow_up.contains("failed criterion 2"), "follow-up: {follow_up}");
    assert!(follow_up.contains("leafx"), "follow-up must name the leaf: {follow_up}");
    assert!(follow_up.ends_with("Please output the full corrected hierarchy in the same format."));
    assert!(!follow_up.contains("criterion 1"), "only the failed criterion is named");
}

#[test]
fn always_echoing_mock_exhausts_every_budget() {
    let original = original_chain();
    let echo = format!("```\n{}```", original.serialize_text());
    // Default budgets: (1 + 2 restarts) conversations × (1 initial +
    // 3 follow-ups) replies each = 12 assistant turns.
    let server = MockServer::start(vec![MockReply::chat(&echo); 12]).unwrap();
    let config = test_config(&server);

    let err = restructure_session(&config, &original, &RecommendationSet::all()).unwrap_err();
    let GatewayError::ExhaustedAttempts {
        transcript,
        validation,
        attempts,
    } = err
    else {
        panic!("expected ExhaustedAttempts, got: {err:?}");
    };

    assert_eq!(attempts.restarts, 2);
    assert_eq!(attempts.follow_ups, 9, "3 follow-ups in each of 3 conversations");
    assert_eq!(transcript.assistant_turn_count(), 12);
    assert_eq!(transcript.user_turn_count(), 12);
    assert_eq!(transcript.turns.len(), 24);
    assert!(!validation.structurally_different, "echo fails only criterion 1");
    assert!(validation.leaves_retained && validation.no_hallucination && validation.format_ok);
    assert_eq!(server.request_count(), 12);
    assert_eq!(transcript.hierarchy_blocks.len(), 12, "every echo was extracted");

    // Every follow-up names criterion 1 and only criterion 1.
    let follow_ups: Vec<&str> = transcript
        .turns
        .iter()
        .filter(|t| t.role == Role::User && t.content.starts_with("The previous hierarchy"))
        .map(|t| t.content.as_str())
        .collect();
    assert_eq!(follow_ups.len(), 9);
    for message in follow_ups {
        assert!(message.contains("failed criterion 1"));
        assert!(!message.contains("criterion 2"));
    }
}

#[test]
fn rate_limited_twice_then_succeeding_takes_three_attempts() {
    let server = MockServer::start(vec![
        MockReply::status(429, r#"{"error":"slow down"}"#),
        MockReply::status(429, r#"{"error":"slow down"}"#),
        MockReply::chat("recovered"),
    ])
    .unwrap();
    let config = test_config(&server);
    let mut transcript = SessionTranscript::new();

    let response =
        request_completion(&config, &[ChatMessage::user("ping")], &mut transcript).unwrap();

    assert_eq!(response.attempts, 3);
    assert_eq!(response.content, "recovered");
    assert_eq!(server.request_count(), 3);
    // Only the outgoing message and the final reply are transcribed.
    assert_eq!(transcript.turns.len(), 2);
    assert_eq!(transcript.turns[1].content, "recovered");
}

#[test]
fn persistent_rate_limiting_fails_after_three_attempts() {
    let server = MockServer::start(vec![
        MockReply::status(429, "{}"),
        MockReply::status(429, "{}"),
        MockReply::status(429, "{}"),
    ])
    .unwrap();
    let config = test_config(&server);
    let mut transcript = SessionTranscript::new();

    let err = request_completion(&config, &[ChatMessage::user("ping")], &mut transcript)
        .unwrap_err();
    assert!(matches!(err, GatewayError::RateLimited { attempts: 3 }));
    assert_eq!(server.request_count(), 3);
}

#[test]
fn fixed_reply_lands_verbatim_in_transcript() {
    let content = "Verbatim — including unicode → and  double  spaces.";
    let server = MockServer::start(vec![MockReply::chat(content)]).unwrap();
    let config = test_config(&server);
    let mut transcript = SessionTranscript::new();

    let response =
        request_completion(&config, &[ChatMessage::user("echo test")], &mut transcript).unwrap();
    assert_eq!(response.content, content);
    assert_eq!(transcript.turns[0].content, "echo test");
    assert_eq!(transcript.turns[1].content, content);
    assert_eq!(transcript.turns[0].role, Role::User);
    assert_eq!(transcript.turns[1].role, Role::Assistant);
}

#[test]
fn auth_missing_sends_no_request_to_the_server() {
    let server = MockServer::start(vec![MockReply::chat("never sent")]).unwrap();
    let mut config = test_config(&server);
    config.api_key_env = "LLM_GATEWAY_TEST_DEFINITELY_UNSET".to_string();
    let mut transcript = SessionTranscript::new();

    let err = request_completion(&config, &[ChatMessage::user("hello")], &mut transcript)
        .unwrap_err();
    assert!(matches!(err, GatewayError::AuthMissing { .. }));
    assert_eq!(server.request_count(), 0, "key check precedes any network call");
    assert!(transcript.turns.is_empty());
}

#[test]
fn server_error_status_is_surfaced_with_body() {
    let server = MockServer::start(vec![MockReply::status(500, "boom")]).unwrap();
    let config = test_config(&server);
    let mut transcript = SessionTranscript::new();

    let err = request_completion(&config, &[ChatMessage::user("x")], &mut transcript).unwrap_err();
    let GatewayError::Http { status, body_snippet } = err else {
        panic!("expected Http error, got {err:?}");
    };
    assert_eq!(status, 500);
    assert_eq!(body_snippet, "boom");
}

#[test]
fn malformed_success_body_is_rejected() {
    let server = MockServer::start(vec![MockReply::status(200, "not json at all")]).unwrap();
    let config = test_config(&server);
    let mut transcript = SessionTranscript::new();

    let err = request_completion(&config, &[ChatMessage::user("x")], &mut transcript).unwrap_err();
    assert!(matches!(err, GatewayError::MalformedResponse { .. }));
}

#[test]
fn slow_server_triggers_timeout() {
    let server = MockServer::start(vec![
        MockReply::chat("too late").with_delay(Duration::from_millis(1500))
    ])
    .unwrap();
    let mut config = test_config(&server);
    config.timeout_secs = 1;
    let mut transcript = SessionTranscript::new();

    let err = request_completion(&config, &[ChatMessage::user("x")], &mut transcript).unwrap_err();
    assert!(matches!(err, GatewayError::Timeout { seconds: 1 }), "got {err:?}");
}

#[test]
fn deterministic_mock_makes_sessions_reproducible() {
    let original = Hierarchy::parse_text("r\n  a\n    leafx\n  b\n").unwrap();
    let script = || {
        vec![
            MockReply::chat("```\nr\n  a\n  b\n```"),
            MockReply::chat("Fixed.\n```\nr\n  a\n  leafx\n  b\n```"),
        ]
    };
    let run = || {
        let server = MockServer::start(script()).unwrap();
        let config = test_config(&server);
        restructure_session(&config, &original, &RecommendationSet::all()).unwrap()
    };
    let first = run();
    let second = run();
    assert_eq!(first.candidate, second.candidate);
    assert_eq!(first.attempts, second.attempts);
    assert_eq!(first.explanation, second.explanation);
    assert_eq!(first.validation, second.validation);
}

#[test]
fn no_hierarchy_in_reply_triggers_a_format_follow_up() {
    let original = original_chain();
    let server = MockServer::start(vec![
        MockReply::chat("I cannot do that. There is no tree here."),
        MockReply::chat("```\nr\n  d\n```"),
    ])
    .unwrap();
    let config = test_config(&server);

    let outcome = restructure_session(&config, &original, &RecommendationSet::all()).unwrap();
    assert_eq!(outcome.attempts.follow_ups, 1);
    assert!(outcome.candidate.is_some());
    let second_body = &server.request_bodies()[1];
    assert!(second_body.contains("failed criterion"), "body: {second_body}");
}
