//! Constructive embeddings of rooted trees into the Poincare ball.
//!
//! The construction walks the tree from the root outward.  The root is pinned
//! at the origin and every child sits at hyperbolic distance `tau` from its
//! parent.  At each internal node the outgoing edges are assigned unit
//! directions drawn from one of two generators:
//!
//! * [`Strategy::Hadamard`] — rows of a Sylvester Hadamard matrix, giving
//!   mutually orthogonal directions with no randomness and O(n·k) cost.
//! * [`Strategy::OptimizedUniform`] — directions spread over the unit sphere
//!   by minimizing an inverse-distance repulsion energy with projected
//!   gradient descent; the direction back to the parent is kept frozen so
//!   children never fold back onto the incoming edge.
//!
//! Distances from a node to its children are exact by construction; the
//! direction generators only control the angles between sibling subtrees.

#![forbid(unsafe_code)]

use hierarchy_core::Hierarchy;
use poincare_geometry::{EmbeddingConfig, GeometryError, PoincarePoint};
use thiserror::Error;

mod construct;
mod directions;
mod io;

pub use directions::{hadamard_directions, optimize_uniform_directions, DirectionSet};
pub use io::{read_embedding, write_embedding, EmbeddingIoError};

/// Which direction generator the constructive embedder uses at every node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Orthogonal directions from Sylvester Hadamard matrix rows.
    Hadamard,
    /// Repulsion-optimized directions on the unit sphere.
    OptimizedUniform,
}

impl Strategy {
    /// Stable identifier used in file headers and CLI flags.
    pub fn tag(self) -> &'static str {
        match self {
            Strategy::Hadamard => "hadamard",
            Strategy::OptimizedUniform => "optimized-uniform",
        }
    }

    /// Parses the identifier produced by [`Strategy::tag`].
    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "hadamard" => Some(Strategy::Hadamard),
            "optimized-uniform" => Some(Strategy::OptimizedUniform),
            _ => None,
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Errors raised while constructing an embedding.
#[derive(Debug, Error)]
pub enum EmbedError {
    /// A node needs more directions than the generator can supply in the
    /// configured dimension.  The Hadamard generator caps out at the largest
    /// power of two that fits in the dimension; the same cap is enforced for
    /// the uniform generator so both strategies accept identical inputs.
    #[error(
        "node '{node}' needs {required} directions but dimension {dimension} \
         supports at most {capacity}"
    )]
    DegreeExceedsCapacity {
        node: String,
        required: usize,
        dimension: usize,
        capacity: usize,
    },
    /// A ball operation failed while placing a node.
    #[error("geometry failure while placing nodes: {0}")]
    Geometry(#[from] GeometryError),
}

/// A finished embedding: one ball point per tree node, plus the settings
/// that produced it.
#[derive(Debug, Clone)]
pub struct EmbeddingResult {
    nodes: Vec<String>,
    points: Vec<PoincarePoint>,
    config: EmbeddingConfig,
    strategy: Strategy,
    seed: u64,
}

impl EmbeddingResult {
    /// Assembles a result from parallel node/point lists.
    ///
    /// Points must all share the configured dimension; the lists must be the
    /// same (non-zero) length.  Used by the file reader and by tests that
    /// build embeddings directly; the constructive embedder guarantees the
    /// stronger property that the first node (the root) sits at the origin.
    pub fn from_parts(
        nodes: Vec<String>,
        points: Vec<PoincarePoint>,
        config: EmbeddingConfig,
        strategy: Strategy,
        seed: u64,
    ) -> Result<Self, GeometryError> {
        if nodes.is_empty() || nodes.len() != points.len() {
            return Err(GeometryError::InvalidConfig(format!(
                "embedding needs matching node/point lists, got {} nodes and {} points",
                nodes.len(),
                points.len()
            )));
        }
        for point in &points {
            if point.dim() != config.dimension {
                return Err(GeometryError::DimensionMismatch {
                    left: config.dimension,
                    right: point.dim(),
                });
            }
        }
        Ok(EmbeddingResult {
            nodes,
            points,
            config,
            strategy,
            seed,
        })
    }

    /// Node names in the same order as [`EmbeddingResult::points`].
    pub fn node_names(&self) -> &[String] {
        &self.nodes
    }

    /// Embedded points, parallel to [`EmbeddingResult::node_names`].
    pub fn points(&self) -> &[PoincarePoint] {
        &self.points
    }

    /// Point for the node at `index`.
    pub fn point(&self, index: usize) -> &PoincarePoint {
        &self.points[index]
    }

    /// Point for a node looked up by name.
    pub fn point_by_name(&self, name: &str) -> Option<&PoincarePoint> {
        let idx = self.nodes.iter().position(|n| n == name)?;
        Some(&self.points[idx])
    }

    /// Number of embedded nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// True when the embedding holds no nodes (never produced by `embed`).
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Settings the embedding was built with.
    pub fn config(&self) -> &EmbeddingConfig {
        &self.config
    }

    /// Direction generator the embedding was built with.
    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    /// Seed recorded for reproducibility (only the optimized-uniform
    /// generator draws randomness, but the seed is kept for both).
    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Embeds a hierarchy into the Poincare ball.
///
/// The root lands exactly at the origin and every tree edge has hyperbolic
/// length `config.tau` up to floating-point rounding.  `seed` drives the
/// optimized-uniform generator; the Hadamard strategy ignores it but records
/// it in the result so output files always carry the full provenance.
pub fn embed(
    hierarchy: &Hierarchy,
    config: &EmbeddingConfig,
    strategy: Strategy,
    seed: u64,
) -> Result<EmbeddingResult, EmbedError> {
    construct::run(hierarchy, config, strategy, seed)
}
