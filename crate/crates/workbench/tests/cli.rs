//! End-to-end tests of the workbench binary: exit codes, artifacts, and
//! stdout for every subcommand. LLM traffic goes to the in-process mock
//! server; nothing here touches a real network.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use llm_gateway::mock::{MockReply, MockServer};
use serde_json::Value;
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn workbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_workbench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn read_json(path: &Path) -> Value {
    let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{path:?}: {e}"));
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("{path:?}: {e}"))
}

/// Writes a small tree with two single-child chains to a temp file.
fn chain_fixture(dir: &TempDir) -> PathBuf {
    let path = dir.path().join("chain.txt");
    std::fs::write(&path, "root\n  a\n    b\n      c\n        leaf1\n        leaf2\n  d\n    leaf3\n")
        .unwrap();
    path
}

/// Writes a two-parent JSON graph to a temp file.
fn diamond_fixture(dir: &TempDir) -> PathBuf {
    let path = dir.path().join("diamond.json");
    std::fs::write(
        &path,
        r#"{"root": ["left", "right"], "left": ["shared"], "right": ["shared"], "shared": []}"#,
    )
    .unwrap();
    path
}

// ---------------------------------------------------------------- analyze

#[test]
fn analyze_reports_fixture_properties() {
    let out_dir = TempDir::new().unwrap();
    let out = workbench(&[
        "analyze",
        fixture("pizza.txt").to_str().unwrap(),
        "--out",
        out_dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("100"), "stdout: {}", stdout(&out));

    let props = read_json(&out_dir.path().join("properties.json"));
    assert_eq!(props["num_nodes"], 100);
    assert_eq!(props["num_edges"], 99);
    assert_eq!(props["depth"], 7);
    assert_eq!(props["num_leaves"], 78);
    assert_eq!(props["max_degree"], 23);
    assert_eq!(props["avg_branching_factor"], 4.5);
    assert_eq!(props["recommended_dimension"], 40);
    assert!(props["tau"].as_f64().unwrap() > 0.0);
    assert_eq!(props["manifest"], "manifest.json");

    let manifest = read_json(&out_dir.path().join("manifest.json"));
    assert_eq!(manifest["command"], "analyze");
    assert_eq!(manifest["outputs"][0], "properties.json");
}

#[test]
fn analyze_missing_file_exits_2() {
    let out = workbench(&["analyze", "/nonexistent/tree.txt"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).starts_with("error:"), "stderr: {}", stderr(&out));
}

#[test]
fn analyze_malformed_tree_exits_2() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "root\n      overindented\n").unwrap();
    let out = workbench(&["analyze", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2, "stderr: {}", stderr(&out));
}

#[test]
fn analyze_multi_parent_graph_points_at_the_flattening_tool() {
    let dir = TempDir::new().unwrap();
    let graph = diamond_fixture(&dir);
    let out = workbench(&["analyze", graph.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("r4"), "stderr should point at the r4 flattening: {err}");
}

// ------------------------------------------------------------------ embed

#[test]
fn embed_same_seed_is_byte_identical_and_seeds_differ() {
    let dirs: Vec<TempDir> = (0..3).map(|_| TempDir::new().unwrap()).collect();
    for (dir, seed) in dirs.iter().zip(["7", "7", "8"]) {
        let out = workbench(&[
            "embed",
            fixture("core50.txt").to_str().unwrap(),
            "--strategy",
            "uniform",
            "--seed",
            seed,
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    }
    let bytes: Vec<Vec<u8>> = dirs
        .iter()
        .map(|d| std::fs::read(d.path().join("embedding.txt")).unwrap())
        .collect();
    assert_eq!(bytes[0], bytes[1], "same seed must reproduce identical bytes");
    assert_ne!(bytes[0], bytes[2], "different seed must move the points");
}

#[test]
fn embed_dimension_too_small_for_degree_exits_2() {
    let dir = TempDir::new().unwrap();
    let out = workbench(&[
        "embed",
        fixture("pizza.txt").to_str().unwrap(),
        "--dim",
        "4",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("directions"), "stderr: {err}");
}

#[test]
fn embed_unknown_strategy_exits_2() {
    let dir = TempDir::new().unwrap();
    let out = workbench(&[
        "embed",
        fixture("core50.txt").to_str().unwrap(),
        "--strategy",
        "bogus",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);
}

// --------------------------------------------------------------- evaluate

#[test]
fn evaluate_is_invariant_to_batch_size() {
    let embed_dir = TempDir::new().unwrap();
    let out = workbench(&[
        "embed",
        fixture("core50.txt").to_str().unwrap(),
        "--out",
        embed_dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let embedding = embed_dir.path().join("embedding.txt");

    let mut reports = Vec::new();
    for rows in ["1", "7", "32"] {
        let eval_dir = TempDir::new().unwrap();
        let out = workbench(&[
            "evaluate",
            fixture("core50.txt").to_str().unwrap(),
            embedding.to_str().unwrap(),
            "--batch-rows",
            rows,
            "--out",
            eval_dir.path().to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
        reports.push(read_json(&eval_dir.path().join("report.json")));
    }
    for field in ["d_avg", "d_wc", "max_stretch", "min_stretch"] {
        let a = reports[0][field].as_f64().unwrap();
        for r in &reports[1..] {
            let b = r[field].as_f64().unwrap();
            assert!((a - b).abs() < 1e-12, "{field}: {a} vs {b}");
        }
    }
    assert_eq!(reports[0]["num_pairs"], 70 * 69);
}

#[test]
fn evaluate_node_mismatch_exits_2() {
    let embed_dir = TempDir::new().unwrap();
    let out = workbench(&[
        "embed",
        fixture("core50.txt").to_str().unwrap(),
        "--out",
        embed_dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let out = workbench(&[
        "evaluate",
        fixture("pizza.txt").to_str().unwrap(),
        embed_dir.path().join("embedding.txt").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2, "stderr: {}", stderr(&out));
}

// ------------------------------------------------------------ restructure

#[test]
fn restructure_heuristic_collapses_chains() {
    let dir = TempDir::new().unwrap();
    let input = chain_fixture(&dir);
    let out_dir = TempDir::new().unwrap();
    let out = workbench(&[
        "restructure",
        input.to_str().unwrap(),
        "--recs",
        "r1",
        "--out",
        out_dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));

    let candidate = std::fs::read_to_string(out_dir.path().join("candidate.txt")).unwrap();
    assert_eq!(candidate, "root\n  c\n    leaf1\n    leaf2\n  leaf3\n");
    let validation = read_json(&out_dir.path().join("validation.json"));
    assert_eq!(validation["passed"], true);
    let diff = read_json(&out_dir.path().join("diff.json"));
    assert_eq!(diff["depth_delta"], -2);
    let explanation = std::fs::read_to_string(out_dir.path().join("explanation.txt")).unwrap();
    assert!(explanation.contains("removed 'a'"), "explanation: {explanation}");
}

#[test]
fn restructure_heuristic_unchanged_tree_still_exits_0() {
    let out_dir = TempDir::new().unwrap();
    let out = workbench(&[
        "restructure",
        fixture("pizza.txt").to_str().unwrap(),
        "--out",
        out_dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("unchanged"));
    let validation = read_json(&out_dir.path().join("validation.json"));
    assert_eq!(validation["passed"], false);
    assert_eq!(validation["structurally_different"], false);
}

#[test]
fn restructure_heuristic_flattens_multi_parent_graph_with_r4() {
    let dir = TempDir::new().unwrap();
    let graph = diamond_fixture(&dir);
    let out_dir = TempDir::new().unwrap();
    let out = workbench(&[
        "restructure",
        graph.to_str().unwrap(),
        "--recs",
        "r4",
        "--out",
        out_dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let explanation = std::fs::read_to_string(out_dir.path().join("explanation.txt")).unwrap();
    assert!(explanation.contains("removed edge"), "explanation: {explanation}");
    let candidate = std::fs::read_to_string(out_dir.path().join("candidate.txt")).unwrap();
    assert_eq!(candidate.matches("shared").count(), 1, "one parent kept");
}

#[test]
fn restructure_heuristic_multi_parent_without_r4_exits_2() {
    let dir = TempDir::new().unwrap();
    let graph = diamond_fixture(&dir);
    let out_dir = TempDir::new().unwrap();
    let out = workbench(&[
        "restructure",
        graph.to_str().unwrap(),
        "--recs",
        "r1",
        "--out",
        out_dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2, "stderr: {}", stderr(&out));
}

#[test]
fn restructure_llm_happy_path_writes_artifacts() {
    let dir = TempDir::new().unwrap();
    let input = chain_fixture(&dir);
    let reply = "Collapsed both single-child chains to trade depth for width.\n\
                 ```\nroot\n  c\n    leaf1\n    leaf2\n  leaf3\n```\n\
                 Depth drops from 4 to 2.";
    let server = MockServer::start(vec![MockReply::chat(reply)]).unwrap();
    let out_dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_workbench"))
        .args([
            "restructure",
            input.to_str().unwrap(),
            "--engine",
            "llm",
            "--out",
            out_dir.path().to_str().unwrap(),
        ])
        .env("LLM_BASE_URL", server.endpoint())
        .env("LLM_MODEL", "mock-model")
        .env("LLM_API_KEY", "test-key")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));

    let candidate = std::fs::read_to_string(out_dir.path().join("candidate.txt")).unwrap();
    assert_eq!(candidate, "root\n  c\n    leaf1\n    leaf2\n  leaf3\n");
    let validation = read_json(&out_dir.path().join("validation.json"));
    assert_eq!(validation["passed"], true);
    assert_eq!(validation["attempts"]["follow_ups"], 0);
    let explanation = std::fs::read_to_string(out_dir.path().join("explanation.txt")).unwrap();
    assert!(explanation.contains("trade depth for width"));
    assert_eq!(server.request_count(), 1);
}

#[test]
fn restructure_llm_exhaustion_exits_1_and_saves_transcript() {
    let dir = TempDir::new().unwrap();
    let input = chain_fixture(&dir);
    let echo = "```\nroot\n  a\n    b\n      c\n        leaf1\n        leaf2\n  d\n    leaf3\n```";
    let server = MockServer::start(vec![MockReply::chat(echo); 12]).unwrap();
    let out_dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_workbench"))
        .args([
            "restructure",
            input.to_str().unwrap(),
            "--engine",
            "llm",
            "--out",
            out_dir.path().to_str().unwrap(),
        ])
        .env("LLM_BASE_URL", server.endpoint())
        .env("LLM_MODEL", "mock-model")
        .env("LLM_API_KEY", "test-key")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 1, "stderr: {}", stderr(&out));

    let transcript = read_json(&out_dir.path().join("transcript.json"));
    assert_eq!(transcript["turns"].as_array().unwrap().len(), 24);
    let validation = read_json(&out_dir.path().join("validation.json"));
    assert_eq!(validation["passed"], false);
    assert_eq!(validation["attempts"]["follow_ups"], 9);
    assert_eq!(validation["attempts"]["restarts"], 2);
    assert_eq!(server.request_count(), 12);
}

#[test]
fn restructure_llm_without_endpoint_exits_2() {
    let dir = TempDir::new().unwrap();
    let input = chain_fixture(&dir);
    let out_dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_workbench"))
        .args([
            "restructure",
            input.to_str().unwrap(),
            "--engine",
            "llm",
            "--out",
            out_dir.path().to_str().unwrap(),
        ])
        .env_remove("LLM_BASE_URL")
        .env_remove("LLM_MODEL")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 2, "stderr: {}", stderr(&out));
}

#[test]
fn restructure_llm_missing_api_key_exits_2() {
    let dir = TempDir::new().unwrap();
    let input = chain_fixture(&dir);
    let server = MockServer::start(vec![MockReply::chat("never reached")]).unwrap();
    let out_dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_workbench"))
        .args([
            "restructure",
            input.to_str().unwrap(),
            "--engine",
            "llm",
            "--out",
            out_dir.path().to_str().unwrap(),
        ])
        .env("LLM_BASE_URL", server.endpoint())
        .env("LLM_MODEL", "mock-model")
        .env_remove("LLM_API_KEY")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 2, "stderr: {}", stderr(&out));
    assert_eq!(server.request_count(), 0, "no request without a key");
}

#[test]
fn restructure_llm_server_error_exits_3() {
    let dir = TempDir::new().unwrap();
    let input = chain_fixture(&dir);
    let server = MockServer::start(vec![MockReply::status(500, "boom")]).unwrap();
    let out_dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_workbench"))
        .args([
            "restructure",
            input.to_str().unwrap(),
            "--engine",
            "llm",
            "--out",
            out_dir.path().to_str().unwrap(),
        ])
        .env("LLM_BASE_URL", server.endpoint())
        .env("LLM_MODEL", "mock-model")
        .env("LLM_API_KEY", "test-key")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 3, "stderr: {}", stderr(&out));
}

// --------------------------------------------------------------- validate

#[test]
fn validate_fixture_pair_passes() {
    let out = workbench(&[
        "validate",
        fixture("pizza.txt").to_str().unwrap(),
        fixture("pizza_restructured.txt").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("pass"));
}

#[test]
fn validate_identical_trees_exits_1() {
    let out = workbench(&[
        "validate",
        fixture("pizza.txt").to_str().unwrap(),
        fixture("pizza.txt").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
}

// ---------------------------------------------------------------- compare

#[test]
fn compare_fixture_pair_emits_two_rows_per_strategy() {
    let out_dir = TempDir::new().unwrap();
    let out = workbench(&[
        "compare",
        fixture("pizza.txt").to_str().unwrap(),
        fixture("pizza_restructured.txt").to_str().unwrap(),
        "--out",
        out_dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));

    let doc = read_json(&out_dir.path().join("comparison.json"));
    assert_eq!(doc["dimension"], 70, "shared dimension comes from the larger max degree");
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4, "two strategies x original/restructured");
    let labels: Vec<&str> = rows.iter().map(|r| r["tree"].as_str().unwrap()).collect();
    assert_eq!(labels, vec!["original", "restructured", "original", "restructured"]);
    for pair in rows.chunks(2) {
        assert_eq!(pair[0]["strategy"], pair[1]["strategy"]);
    }
    assert_eq!(doc["diff"]["removed_nodes"].as_array().unwrap().len(), 11);
}

#[test]
fn compare_identical_inputs_fails_the_gate_with_exit_1() {
    let out_dir = TempDir::new().unwrap();
    let out = workbench(&[
        "compare",
        fixture("pizza.txt").to_str().unwrap(),
        fixture("pizza.txt").to_str().unwrap(),
        "--out",
        out_dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1, "stderr: {}", stderr(&out));
    let validation = read_json(&out_dir.path().join("validation.json"));
    assert_eq!(validation["structurally_different"], false);
}

// ----------------------------------------------------------------- ablate

#[test]
fn ablate_emits_the_seven_row_grid_per_strategy() {
    let dir = TempDir::new().unwrap();
    let input = chain_fixture(&dir);
    let out_dir = TempDir::new().unwrap();
    let out = workbench(&[
        "ablate",
        input.to_str().unwrap(),
        "--strategy",
        "both",
        "--out",
        out_dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));

    let doc = read_json(&out_dir.path().join("ablation.json"));
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 14, "7 subsets x 2 strategies");
    let subsets: Vec<&str> = rows.iter().map(|r| r["subset"].as_str().unwrap()).collect();
    let expected = ["baseline", "r1", "r2", "r3", "r1,r2,r3", "r2,r3,r4", "all"];
    assert_eq!(&subsets[..7], &expected);
    assert_eq!(&subsets[7..], &expected);

    // Subsets without the width rule cannot transform a plain chain and
    // must carry the no-transformation flag with baseline numbers.
    for row in rows {
        let subset = row["subset"].as_str().unwrap();
        let flagged = row["note"].as_str() == Some("no transformation");
        let should_flag = matches!(subset, "r2" | "r3" | "r2,r3,r4");
        assert_eq!(flagged, should_flag, "subset {subset}");
    }
    // The width rule strictly improves a chain.
    let by = |s: &str, strat: &str| {
        rows.iter()
            .find(|r| r["subset"] == s && r["strategy"] == strat)
            .unwrap()["d_avg"]
            .as_f64()
            .unwrap()
    };
    for strat in ["hadamard", "optimized-uniform"] {
        assert!(by("r1", strat) < by("baseline", strat), "{strat}");
    }
}

#[test]
fn ablate_baseline_row_matches_a_plain_evaluate_run() {
    let dir = TempDir::new().unwrap();
    let input = chain_fixture(&dir);

    let embed_dir = TempDir::new().unwrap();
    let out = workbench(&[
        "embed",
        input.to_str().unwrap(),
        "--out",
        embed_dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let eval_dir = TempDir::new().unwrap();
    let out = workbench(&[
        "evaluate",
        input.to_str().unwrap(),
        embed_dir.path().join("embedding.txt").to_str().unwrap(),
        "--out",
        eval_dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let report = read_json(&eval_dir.path().join("report.json"));

    let ablate_dir = TempDir::new().unwrap();
    let out = workbench(&[
        "ablate",
        input.to_str().unwrap(),
        "--strategy",
        "hadamard",
        "--out",
        ablate_dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let doc = read_json(&ablate_dir.path().join("ablation.json"));
    let baseline = &doc["rows"].as_array().unwrap()[0];
    assert_eq!(baseline["subset"], "baseline");
    assert_eq!(baseline["d_avg"], report["d_avg"], "identical config, seed, and strategy");
    assert_eq!(baseline["d_wc"], report["d_wc"]);
}

// ------------------------------------------------------------- export-viz

#[test]
fn export_viz_lists_every_node_and_edge() {
    let out = workbench(&["export-viz", fixture("core50.txt").to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph hierarchy {"));
    let node_lines = dot.lines().filter(|l| l.ends_with("\";") && !l.contains("->")).count();
    let edge_lines = dot.lines().filter(|l| l.contains("->")).count();
    assert_eq!(node_lines, 70);
    assert_eq!(edge_lines, 69);

    let out_dir = TempDir::new().unwrap();
    let out = workbench(&[
        "export-viz",
        fixture("core50.txt").to_str().unwrap(),
        "--out",
        out_dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let saved = std::fs::read_to_string(out_dir.path().join("tree.dot")).unwrap();
    assert!(saved.contains("manifest=manifest.json"));
}
