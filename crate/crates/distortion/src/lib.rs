//! Distortion metrics: how faithfully a ball embedding reproduces the tree
//! metric it was built from.
//!
//! The construction maps every tree edge to hyperbolic length `tau`, so the
//! natural yardstick for a pair `(u, v)` is the stretch factor
//! `d_ball(u, v) / (tau * d_tree(u, v))` — a perfectly faithful embedding
//! has stretch 1 everywhere.  Two summary numbers are reported:
//!
//! * average distortion: the mean of `|stretch - 1|` over all ordered pairs
//!   of distinct nodes;
//! * worst-case distortion: the largest stretch divided by the smallest,
//!   which is scale-free and at least 1.
//!
//! Pairs are visited in row batches streamed from the tree so memory stays
//! bounded at `batch_rows * N` distances; accumulation is compensated
//! (Kahan) and row-major, making results bit-stable across batch sizes.

#![forbid(unsafe_code)]

use std::time::Instant;

use embedders::EmbeddingResult;
use hierarchy_core::{all_pairs_distances, Hierarchy};
use poincare_geometry::{distance, GeometryError, PoincarePoint};
use serde::Serialize;
use thiserror::Error;

/// Errors raised by the metric computations.
#[derive(Debug, Error)]
pub enum MetricsError {
    /// The embedding and the tree do not cover the same node set.
    #[error("embedding and tree node sets differ (missing from embedding: {missing_from_embedding:?}; not in tree: {extra_in_embedding:?})")]
    NodeMismatch {
        missing_from_embedding: Vec<String>,
        extra_in_embedding: Vec<String>,
    },
    /// Two distinct nodes share a point, so the smallest stretch factor is
    /// zero and the worst-case ratio is undefined.  Always an upstream bug.
    #[error("nodes {first:?} and {second:?} are embedded at hyperbolic distance 0")]
    DegenerateEmbedding { first: String, second: String },
    /// Metrics over fewer than two nodes are not defined.
    #[error("distortion needs at least 2 nodes, got {got}")]
    TooFewNodes { got: usize },
    /// A distance computation failed.
    #[error("geometry failure while measuring distances: {0}")]
    Geometry(#[from] GeometryError),
}

/// Summary of one evaluation pass.
#[derive(Debug, Clone, Serialize)]
pub struct DistortionReport {
    /// Mean of `|stretch - 1|` over ordered pairs of distinct nodes.
    pub d_avg: f64,
    /// `max_stretch / min_stretch`; 1 for a perfectly uniform embedding.
    pub d_wc: f64,
    /// Largest stretch factor seen over all pairs.
    pub max_stretch: f64,
    /// Smallest stretch factor seen over all pairs.
    pub min_stretch: f64,
    /// Number of embedded nodes N.
    pub num_nodes: usize,
    /// Number of ordered pairs N * (N - 1) the averages run over.
    pub num_pairs: u64,
    /// Row-batch size the pass streamed with.
    pub batch_rows: usize,
    /// Wall-clock seconds the pass took.
    pub wall_seconds: f64,
}

/// Compensated (Kahan) accumulator: running sums stay accurate to a few
/// ulps even over billions of terms, which keeps results independent of
/// batch boundaries at the 1e-12 level.
#[derive(Debug, Default, Clone, Copy)]
struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    fn add(&mut self, value: f64) {
        let y = value - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

struct PairAccumulator {
    abs_deviation: KahanSum,
    max_stretch: f64,
    min_stretch: f64,
    zero_pair: Option<(usize, usize)>,
    pairs: u64,
}

/// Streams every ordered pair once (row-major) and accumulates the stretch
/// statistics both metrics are computed from.
fn stream_pairs(
    emb: &EmbeddingResult,
    h: &Hierarchy,
    batch_rows: usize,
) -> Result<PairAccumulator, MetricsError> {
    assert!(batch_rows >= 1, "batch_rows must be at least 1");
    let n = h.len();
    if n < 2 {
        return Err(MetricsError::TooFewNodes { got: n });
    }
    let points = align_points(emb, h)?;
    let tau = emb.config().tau;

    let mut acc = PairAccumulator {
        abs_deviation: KahanSum::default(),
        max_stretch: f64::NEG_INFINITY,
        min_stretch: f64::INFINITY,
        zero_pair: None,
        pairs: 0,
    };
    for batch in all_pairs_distances(h, batch_rows) {
        for (offset, row) in batch.rows.iter().enumerate() {
            let u = batch.start_row + offset;
            for (v, &tree_dist) in row.iter().enumerate() {
                if v == u {
                    continue;
                }
                let ball_dist = distance(points[u], points[v])?;
                let stretch = ball_dist / (tau * f64::from(tree_dist));
                acc.abs_deviation.add((stretch - 1.0).abs());
                if stretch > acc.max_stretch {
                    acc.max_stretch = stretch;
                }
                if stretch < acc.min_stretch {
                    acc.min_stretch = stretch;
                }
                if ball_dist == 0.0 && acc.zero_pair.is_none() {
                    acc.zero_pair = Some((u, v));
                }
                acc.pairs += 1;
            }
        }
    }
    Ok(acc)
}

/// Resolves the embedding's points into tree-index order, verifying the two
/// node sets coincide exactly.
fn align_points<'e>(
    emb: &'e EmbeddingResult,
    h: &Hierarchy,
) -> Result<Vec<&'e PoincarePoint>, MetricsError> {
    let mut missing: Vec<String> = Vec::new();
    let mut points: Vec<Option<&PoincarePoint>> = vec![None; h.len()];
    let mut extra: Vec<String> = Vec::new();
    for (name, point) in emb.node_names().iter().zip(emb.points()) {
        match h.node_index(name) {
            Some(idx) => points[idx] = Some(point),
            None => extra.push(name.clone()),
        }
    }
    for (idx, slot) in points.iter().enumerate() {
        if slot.is_none() {
            missing.push(h.name(idx).to_string());
        }
    }
    if !missing.is_empty() || !extra.is_empty() {
        missing.sort();
        extra.sort();
        return Err(MetricsError::NodeMismatch {
            missing_from_embedding: missing,
            extra_in_embedding: extra,
        });
    }
    Ok(points
        .into_iter()
        .map(|p| p.expect("verified above"))
        .collect())
}

/// Average distortion: mean over ordered pairs of distinct nodes of the
/// absolute deviation of the stretch factor from 1.
pub fn avg_distortion(
    emb: &EmbeddingResult,
    h: &Hierarchy,
    batch_rows: usize,
) -> Result<f64, MetricsError> {
    let acc = stream_pairs(emb, h, batch_rows)?;
    Ok(acc.abs_deviation.value() / acc.pairs as f64)
}

/// Worst-case distortion: the largest stretch factor divided by the
/// smallest.  Errors if two distinct nodes coincide (zero minimum).
pub fn worst_case_distortion(
    emb: &EmbeddingResult,
    h: &Hierarchy,
    batch_rows: usize,
) -> Result<f64, MetricsError> {
    let acc = stream_pairs(emb, h, batch_rows)?;
    if let Some((u, v)) = acc.zero_pair {
        return Err(MetricsError::DegenerateEmbedding {
            first: h.name(u).to_string(),
            second: h.name(v).to_string(),
        });
    }
    Ok(acc.max_stretch / acc.min_stretch)
}

/// Computes both metrics in one streamed pass and reports the supporting
/// statistics.
pub fn evaluate(
    emb: &EmbeddingResult,
    h: &Hierarchy,
    batch_rows: usize,
) -> Result<DistortionReport, MetricsError> {
    let started = Instant::now();
    let acc = stream_pairs(emb, h, batch_rows)?;
    if let Some((u, v)) = acc.zero_pair {
        return Err(MetricsError::DegenerateEmbedding {
            first: h.name(u).to_string(),
            second: h.name(v).to_string(),
        });
    }
    Ok(DistortionReport {
        d_avg: acc.abs_deviation.value() / acc.pairs as f64,
        d_wc: acc.max_stretch / acc.min_stretch,
        max_stretch: acc.max_stretch,
        min_stretch: acc.min_stretch,
        num_nodes: h.len(),
        num_pairs: acc.pairs,
        batch_rows,
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}
