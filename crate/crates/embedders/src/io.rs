//! Plain-text serialization of embeddings.
//!
//! The format is line oriented: comment lines starting with `#` carry
//! `key=value` settings, then one tab-separated record per node holding the
//! node name followed by its coordinates.  Coordinates are written with 18
//! significant digits so a write/read cycle reproduces every `f64` exactly.

use poincare_geometry::{EmbeddingConfig, GeometryError, PoincarePoint};
use std::collections::HashMap;
use thiserror::Error;

use crate::{EmbeddingResult, Strategy};

/// Errors raised while reading or writing embedding files.
#[derive(Debug, Error)]
pub enum EmbeddingIoError {
    /// A node name cannot be represented in the tab-separated format.
    #[error("node name {name:?} cannot be written (tabs, newlines, or a leading '#')")]
    UnwritableName { name: String },
    /// The header is missing a required setting.
    #[error("embedding header is missing '{key}'")]
    MissingHeaderKey { key: &'static str },
    /// A line could not be parsed.
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    /// The file parsed but describes an invalid embedding.
    #[error("embedding file describes invalid geometry: {0}")]
    Geometry(#[from] GeometryError),
}

/// Renders an embedding to the text format.  `extra_header` entries are
/// appended to the header line-by-line as `# key=value` comments (used for
/// run-manifest back-references); the reader ignores keys it does not know.
pub fn write_embedding(
    result: &EmbeddingResult,
    extra_header: &[(&str, &str)],
) -> Result<String, EmbeddingIoError> {
    let config = result.config();
    let mut out = String::new();
    out.push_str(&format!(
        "# dimension={} tau={:.17e} strategy={} seed={} epsilon={:.17e} max_path_length={}\n",
        config.dimension,
        config.tau,
        result.strategy().tag(),
        result.seed(),
        config.epsilon,
        config.max_path_length,
    ));
    for (key, value) in extra_header {
        out.push_str(&format!("# {key}={value}\n"));
    }
    for (name, point) in result.node_names().iter().zip(result.points()) {
        if name.contains('\t') || name.contains('\n') || name.contains('\r')
            || name.starts_with('#')
        {
            return Err(EmbeddingIoError::UnwritableName { name: name.clone() });
        }
        out.push_str(name);
        for c in point.coords() {
            out.push_str(&format!("\t{c:.17e}"));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Parses the text format produced by [`write_embedding`].
pub fn read_embedding(text: &str) -> Result<EmbeddingResult, EmbeddingIoError> {
    let mut header: HashMap<String, String> = HashMap::new();
    let mut nodes: Vec<String> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            for token in comment.split_whitespace() {
                if let Some((key, value)) = token.split_once('=') {
                    header.insert(key.to_string(), value.to_string());
                }
            }
            continue;
        }
        let mut fields = line.split('\t');
        let name = fields
            .next()
            .expect("split always yields at least one field")
            .to_string();
        let coords: Vec<f64> = fields
            .map(|f| {
                f.trim().parse::<f64>().map_err(|e| EmbeddingIoError::Malformed {
                    line: line_no,
                    reason: format!("bad coordinate {f:?}: {e}"),
                })
            })
            .collect::<Result<_, _>>()?;
        if coords.is_empty() {
            return Err(EmbeddingIoError::Malformed {
                line: line_no,
                reason: format!("node {name:?} has no coordinates"),
            });
        }
        nodes.push(name);
        rows.push(coords);
    }

    let dimension: usize = require_parsed(&header, "dimension")?;
    let tau: f64 = require_parsed(&header, "tau")?;
    let strategy_tag = header
        .get("strategy")
        .ok_or(EmbeddingIoError::MissingHeaderKey { key: "strategy" })?;
    let strategy = Strategy::from_tag(strategy_tag).ok_or_else(|| EmbeddingIoError::Malformed {
        line: 1,
        reason: format!("unknown strategy {strategy_tag:?}"),
    })?;
    let seed: u64 = parsed_or(&header, "seed", 0)?;
    let epsilon: f64 = parsed_or(&header, "epsilon", f64::EPSILON)?;
    let max_path_length: u32 = parsed_or(&header, "max_path_length", 1)?;

    if nodes.is_empty() {
        return Err(EmbeddingIoError::Malformed {
            line: 1,
            reason: "no node records found".to_string(),
        });
    }
    for (row_idx, row) in rows.iter().enumerate() {
        if row.len() != dimension {
            return Err(EmbeddingIoError::Malformed {
                line: 0,
                reason: format!(
                    "node {:?} has {} coordinates, header says dimension={}",
                    nodes[row_idx],
                    row.len(),
                    dimension
                ),
            });
        }
    }

    let config = EmbeddingConfig::new(dimension, tau, epsilon, max_path_length)?;
    let points = rows
        .into_iter()
        .map(PoincarePoint::new)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EmbeddingResult::from_parts(nodes, points, config, strategy, seed)?)
}

fn require_parsed<T: std::str::FromStr>(
    header: &HashMap<String, String>,
    key: &'static str,
) -> Result<T, EmbeddingIoError>
where
    T::Err: std::fmt::Display,
{
    let raw = header
        .get(key)
        .ok_or(EmbeddingIoError::MissingHeaderKey { key })?;
    raw.parse().map_err(|e| EmbeddingIoError::Malformed {
        line: 1,
        reason: format!("bad header value {key}={raw:?}: {e}"),
    })
}

fn parsed_or<T: std::str::FromStr>(
    header: &HashMap<String, String>,
    key: &'static str,
    default: T,
) -> Result<T, EmbeddingIoError>
where
    T::Err: std::fmt::Display,
{
    match header.get(key) {
        None => Ok(default),
        Some(raw) => raw.parse().map_err(|e| EmbeddingIoError::Malformed {
            line: 1,
            reason: format!("bad header value {key}={raw:?}: {e}"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed;
    use hierarchy_core::Hierarchy;

    fn sample() -> EmbeddingResult {
        let h = Hierarchy::parse_text("r\n  a\n    b\n  c\n").unwrap();
        let config = EmbeddingConfig::for_tree_depth(4, 4).unwrap();
        embed(&h, &config, Strategy::Hadamard, 123).unwrap()
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let original = sample();
        let text = write_embedding(&original, &[]).unwrap();
        let parsed = read_embedding(&text).unwrap();
        assert_eq!(parsed.node_names(), original.node_names());
        assert_eq!(parsed.strategy(), original.strategy());
        assert_eq!(parsed.seed(), original.seed());
        assert_eq!(parsed.config().dimension, original.config().dimension);
        assert_eq!(parsed.config().tau, original.config().tau);
        assert_eq!(parsed.config().epsilon, original.config().epsilon);
        assert_eq!(
            parsed.config().max_path_length,
            original.config().max_path_length
        );
        for i in 0..original.len() {
            assert_eq!(parsed.point(i).coords(), original.point(i).coords());
        }
    }

    #[test]
    fn extra_header_entries_survive_and_are_ignored() {
        let original = sample();
        let text = write_embedding(&original, &[("manifest", "out/run.json")]).unwrap();
        assert!(text.contains("# manifest=out/run.json\n"));
        let parsed = read_embedding(&text).unwrap();
        assert_eq!(parsed.len(), original.len());
    }

    #[test]
    fn coordinates_carry_eighteen_significant_digits() {
        let text = write_embedding(&sample(), &[]).unwrap();
        let data_line = text.lines().find(|l| !l.starts_with('#')).unwrap();
        let coord = data_line.split('\t').nth(1).unwrap();
        let mantissa = coord.split('e').next().unwrap();
        let digits = mantissa.chars().filter(|c| c.is_ascii_digit()).count();
        assert!(digits >= 17, "coordinate {coord} has only {digits} digits");
    }

    #[test]
    fn missing_header_key_is_reported() {
        let err = read_embedding("a\t0.0\n").unwrap_err();
        assert!(matches!(
            err,
            EmbeddingIoError::MissingHeaderKey { key: "dimension" }
        ));
    }

    #[test]
    fn wrong_coordinate_count_is_reported() {
        let text = "# dimension=3 tau=1.0 strategy=hadamard seed=0\na\t0.1\t0.2\n";
        let err = read_embedding(text).unwrap_err();
        match err {
            EmbeddingIoError::Malformed { reason, .. } => {
                assert!(reason.contains("dimension=3"), "reason: {reason}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn bad_coordinate_is_reported_with_line_number() {
        let text = "# dimension=2 tau=1.0 strategy=hadamard seed=0\na\t0.1\tnope\n";
        let err = read_embedding(text).unwrap_err();
        match err {
            EmbeddingIoError::Malformed { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn out_of_ball_coordinates_are_rejected() {
        let text = "# dimension=2 tau=1.0 strategy=hadamard seed=0\na\t0.9\t0.9\n";
        let err = read_embedding(text).unwrap_err();
        assert!(matches!(err, EmbeddingIoError::Geometry(_)));
    }

    #[test]
    fn tab_in_node_name_is_rejected_at_write_time() {
        let h = Hierarchy::parse_text("r\n  a\tb\n").unwrap();
        let config = EmbeddingConfig::for_tree_depth(2, 2).unwrap();
        let result = embed(&h, &config, Strategy::Hadamard, 0).unwrap();
        let err = write_embedding(&result, &[]).unwrap_err();
        assert!(matches!(err, EmbeddingIoError::UnwritableName { .. }));
    }
}
