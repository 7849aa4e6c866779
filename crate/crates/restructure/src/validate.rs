//! Candidate validation: the four acceptance criteria for a proposed
//! replacement hierarchy.
//!
//! 1. **Structurally different** — the candidate's edge set (over
//!    labels) differs from the original's.
//! 2. **Leaves retained** — every original leaf label appears among the
//!    candidate's nodes (not necessarily still as a leaf).
//! 3. **No hallucination** — candidate labels are a subset of the
//!    original's, and the candidate is a single-rooted tree with unique
//!    labels.
//! 4. **Format** — the candidate parses under the strict text grammar
//!    (two-space indentation).
//!
//! Criteria 1–3 are judged on a *lenient* reading of the candidate
//! (any consistent indentation defines nesting) so that a reply that
//! merely broke the two-space convention still gets a verdict on its
//! structure; only criterion 4 holds it to the strict grammar.

use std::collections::{BTreeSet, HashSet};

use hierarchy_core::Hierarchy;
use serde::{Deserialize, Serialize};

/// Verdicts for the four candidate-acceptance criteria plus the
/// evidence behind any failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Criterion 1: the candidate's edges differ from the original's.
    pub structurally_different: bool,
    /// Criterion 2: every original leaf survives as a candidate node.
    pub leaves_retained: bool,
    /// Criterion 3: no invented labels and a well-formed single tree.
    pub no_hallucination: bool,
    /// Criterion 4: the candidate parses under the strict grammar.
    pub format_ok: bool,
    /// Evidence for whichever criteria failed.
    pub details: ValidationDetails,
}

/// Per-criterion evidence collected while validating.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationDetails {
    /// Original leaf labels absent from the candidate (criterion 2).
    pub missing_leaves: Vec<String>,
    /// Candidate labels absent from the original (criterion 3).
    pub invented_nodes: Vec<String>,
    /// Tree-shape problems found by the lenient reading — multiple
    /// roots, duplicate labels, or no content (criterion 3).
    pub tree_issues: Vec<String>,
    /// Strict-grammar parse error (criterion 4).
    pub parse_error: Option<String>,
}

/// One failed criterion, numbered 1–4, with human-readable evidence.
/// Used to phrase follow-up repair prompts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionFailure {
    /// Criterion number in 1..=4.
    pub index: u8,
    /// Short criterion name.
    pub name: &'static str,
    /// What went wrong, concretely.
    pub evidence: String,
}

impl ValidationReport {
    /// True when all four criteria hold.
    pub fn passed(&self) -> bool {
        self.structurally_different && self.leaves_retained && self.no_hallucination && self.format_ok
    }

    /// The failed criteria in ascending order with evidence strings.
    pub fn failures(&self) -> Vec<CriterionFailure> {
        let mut out = Vec::new();
        if !self.structurally_different {
            out.push(CriterionFailure {
                index: 1,
                name: "structurally different",
                evidence: "the candidate has exactly the same parent-child edges as the original"
                    .to_string(),
            });
        }
        if !self.leaves_retained {
            let listed = preview_list(&self.details.missing_leaves);
            out.push(CriterionFailure {
                index: 2,
                name: "leaves retained",
                evidence: format!("original leaf nodes are missing from the candidate: {listed}"),
            });
        }
        if !self.no_hallucination {
            let evidence = if self.details.invented_nodes.is_empty() {
                format!(
                    "the candidate is not a single-rooted tree: {}",
                    preview_list(&self.details.tree_issues)
                )
            } else {
                format!(
                    "the candidate introduces nodes absent from the original: {}",
                    preview_list(&self.details.invented_nodes)
                )
            };
            out.push(CriterionFailure {
                index: 3,
                name: "no hallucinated nodes",
                evidence,
            });
        }
        if !self.format_ok {
            out.push(CriterionFailure {
                index: 4,
                name: "format",
                evidence: format!(
                    "the candidate does not parse as a two-space-indented hierarchy: {}",
                    self.details
                        .parse_error
                        .as_deref()
                        .unwrap_or("unknown parse error")
                ),
            });
        }
        out
    }
}

/// Renders up to eight items of a list for evidence strings.
fn preview_list(items: &[String]) -> String {
    const LIMIT: usize = 8;
    if items.is_empty() {
        return "(none listed)".to_string();
    }
    let mut shown: Vec<String> = items.iter().take(LIMIT).cloned().collect();
    if items.len() > LIMIT {
        shown.push(format!("... and {} more", items.len() - LIMIT));
    }
    shown.join(", ")
}

/// A candidate read with lenient indentation rules: labels in order of
/// first appearance, the implied edge set, and any tree-shape issues.
struct LenientReading {
    labels: Vec<String>,
    edges: BTreeSet<(String, String)>,
    issues: Vec<String>,
}

/// Reads `text` as an indented tree where *any* increase in leading
/// whitespace opens a child level (each whitespace character counts
/// one column). Never fails: shape problems are recorded as issues and
/// parsing continues so labels and edges can still be compared.
fn read_lenient(text: &str) -> LenientReading {
    let mut labels: Vec<String> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut edges: BTreeSet<(String, String)> = BTreeSet::new();
    let mut issues: Vec<String> = Vec::new();
    // Stack of (indent columns, label) from root to the current branch.
    let mut stack: Vec<(usize, String)> = Vec::new();
    let mut root: Option<String> = None;

    for raw in text.lines() {
        let line = raw.trim_end();
        if line.trim().is_empty() {
            continue;
        }
        let name = line.trim_start();
        let indent = line.len() - name.len();
        let name = name.to_string();

        if !seen.insert(name.clone()) {
            issues.push(format!("duplicate node label '{name}'"));
        } else {
            labels.push(name.clone());
        }

        while stack.last().is_some_and(|(col, _)| *col >= indent) {
            stack.pop();
        }
        match stack.last() {
            Some((_, parent)) => {
                edges.insert((parent.clone(), name.clone()));
            }
            None => {
                if let Some(existing) = &root {
                    issues.push(format!("multiple roots: '{existing}' and '{name}'"));
                } else {
                    root = Some(name.clone());
                }
            }
        }
        stack.push((indent, name));
    }

    if labels.is_empty() {
        issues.push("no content".to_string());
    }
    LenientReading { labels, edges, issues }
}

/// Checks `candidate_text` against `original` on the four acceptance
/// criteria. Never errors: every failure mode is a report field.
pub fn validate_candidate(original: &Hierarchy, candidate_text: &str) -> ValidationReport {
    let reading = read_lenient(candidate_text);

    let original_edges: BTreeSet<(String, String)> = original
        .edges()
        .map(|(p, c)| (p.to_string(), c.to_string()))
        .collect();
    let original_labels: HashSet<&str> = original.names().iter().map(String::as_str).collect();

    // Criterion 1: edge sets over labels must differ.
    let structurally_different = reading.edges != original_edges;

    // Criterion 2: every original leaf label must appear as a node.
    let candidate_labels: HashSet<&str> = reading.labels.iter().map(String::as_str).collect();
    let missing_leaves: Vec<String> = (0..original.len())
        .filter(|&node| original.is_leaf(node))
        .map(|node| original.name(node))
        .filter(|leaf| !candidate_labels.contains(leaf))
        .map(str::to_string)
        .collect();
    let leaves_retained = missing_leaves.is_empty();

    // Criterion 3: no invented labels, and a proper single-rooted tree.
    let invented_nodes: Vec<String> = reading
        .labels
        .iter()
        .filter(|label| !original_labels.contains(label.as_str()))
        .cloned()
        .collect();
    let no_hallucination = invented_nodes.is_empty() && reading.issues.is_empty();

    // Criterion 4: the strict grammar must accept the candidate.
    let parse_error = Hierarchy::parse_text(candidate_text).err().map(|e| e.to_string());
    let format_ok = parse_error.is_none();

    ValidationReport {
        structurally_different,
        leaves_retained,
        no_hallucination,
        format_ok,
        details: ValidationDetails {
            missing_leaves,
            invented_nodes,
            tree_issues: reading.issues,
            parse_error,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Hierarchy {
        Hierarchy::parse_text("r\n  a\n    c\n  b\n").unwrap()
    }

    #[test]
    fn byte_identical_candidate_only_fails_difference() {
        let h = sample();
        let report = validate_candidate(&h, &h.serialize_text());
        assert!(!report.structurally_different);
        assert!(report.leaves_retained);
        assert!(report.no_hallucination);
        assert!(report.format_ok);
        assert!(!report.passed());
        let failures = report.failures();
        assert_eq!(failures.len(), 1);
        assert_eq!(failures[0].index, 1);
    }

    #[test]
    fn missing_leaf_is_reported_by_name() {
        let h = sample();
        let report = validate_candidate(&h, "r\n  a\n  b\n");
        assert!(!report.leaves_retained);
        assert_eq!(report.details.missing_leaves, vec!["c".to_string()]);
        assert!(report.structurally_different);
        assert!(report.no_hallucination);
        assert!(report.format_ok);
        let failure = &report.failures()[0];
        assert_eq!(failure.index, 2);
        assert!(failure.evidence.contains('c'));
    }

    #[test]
    fn invented_node_fails_hallucination_check() {
        let h = sample();
        let report = validate_candidate(&h, "r\n  a\n    c\n  b\n  zzz\n");
        assert!(!report.no_hallucination);
        assert_eq!(report.details.invented_nodes, vec!["zzz".to_string()]);
        assert!(report.structurally_different);
        assert!(report.leaves_retained);
        assert!(report.format_ok);
    }

    #[test]
    fn three_space_indentation_fails_only_format() {
        let h = sample();
        let report = validate_candidate(&h, "r\n   c\n   b\n   a\n");
        assert!(report.structurally_different);
        assert!(report.leaves_retained);
        assert!(report.no_hallucination);
        assert!(!report.format_ok);
        assert!(report.details.parse_error.is_some());
        let failures = report.failures();
        assert_eq!(failures.len(), 1);
        assert_eq!(failures[0].index, 4);
    }

    #[test]
    fn restructured_tree_in_strict_format_passes_all_criteria() {
        let h = sample();
        let report = validate_candidate(&h, "r\n  c\n  b\n  a\n");
        assert!(report.passed(), "report: {report:?}");
        assert!(report.failures().is_empty());
    }

    #[test]
    fn multiple_roots_fail_tree_shape() {
        let h = sample();
        let report = validate_candidate(&h, "r\n  a\nb\n  c\n");
        assert!(!report.no_hallucination);
        assert!(report
            .details
            .tree_issues
            .iter()
            .any(|issue| issue.contains("multiple roots")));
        // Labels are still collected, so leaf retention stays judgeable.
        assert!(report.leaves_retained);
    }

    #[test]
    fn duplicate_labels_fail_tree_shape() {
        let h = sample();
        let report = validate_candidate(&h, "r\n  a\n    c\n  b\n  a\n");
        assert!(!report.no_hallucination);
        assert!(report
            .details
            .tree_issues
            .iter()
            .any(|issue| issue.contains("duplicate node label 'a'")));
    }

    #[test]
    fn empty_candidate_fails_everything_it_can() {
        let h = sample();
        let report = validate_candidate(&h, "\n\n");
        assert!(report.structurally_different, "no edges is not the same tree");
        assert!(!report.leaves_retained);
        assert!(!report.no_hallucination);
        assert!(!report.format_ok);
    }

    #[test]
    fn lenient_reading_handles_dedent_between_levels() {
        // Child at 4 columns, next line at 2: pops back to the root.
        let h = Hierarchy::parse_text("r\n  a\n  b\n").unwrap();
        let report = validate_candidate(&h, "r\n    a\n  b\n");
        assert!(report.no_hallucination);
        assert!(report.leaves_retained);
        // Lenient edges are (r,a) and (r,b) — same as original.
        assert!(!report.structurally_different);
        assert!(!report.format_ok, "four-space indentation is not the strict grammar");
    }

    #[test]
    fn tab_indentation_is_lenient_but_not_strict() {
        let h = sample();
        let report = validate_candidate(&h, "r\n\ta\n\t\tc\n\tb\n");
        assert!(!report.structurally_different, "tabs nest the same tree leniently");
        assert!(report.leaves_retained);
        assert!(report.no_hallucination);
        assert!(!report.format_ok);
    }
}
