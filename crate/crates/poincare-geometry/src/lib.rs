//! Primitives of the Poincaré ball model of hyperbolic space: points
//! strictly inside the unit ball, Möbius addition, the hyperbolic
//! distance, Möbius translations (isometries), the per-edge length scale
//! `tau`, and the embedding-dimension rule.
//!
//! Everything here is a pure value-level function; no shared state, safe
//! to call concurrently.

#![forbid(unsafe_code)]

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Below this, a Möbius denominator is treated as numerically destroyed.
///
/// For points kept inside the norm safety floor the true denominator is
/// at least `(1 - |a||b|)^2 ≈ (10·eps)^2 ≈ 5e-30`; anything at or below
/// this floor (including negative values produced by catastrophic
/// cancellation) means the pair sits too close to the boundary for the
/// floating format, and the operation reports overflow instead of
/// emitting garbage.
pub const MIN_MOBIUS_DENOMINATOR: f64 = 1e-30;

/// Points whose squared norm exceeds `1 - NORM_MARGIN * epsilon` are
/// radially rescaled back onto that shell after every operation, keeping
/// inverse-tanh values finite.
pub const NORM_MARGIN: f64 = 10.0;

#[derive(Debug, Error)]
pub enum GeometryError {
    /// Construction from coordinates with squared norm >= 1.
    #[error("point lies outside the open unit ball (norm^2 = {norm_sq})")]
    OutsideBall { norm_sq: f64 },

    /// Construction from NaN or infinite coordinates.
    #[error("point coordinates must all be finite")]
    NonFinite,

    /// Two points of different dimension fed to a binary operation.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A denominator collapsed or a result stopped being representable;
    /// the operands are too close to the boundary for this float format.
    #[error("numeric overflow: points too near the ball boundary for this precision")]
    NumericOverflow,

    /// An embedding configuration violated its invariants.
    #[error("invalid embedding config: {0}")]
    InvalidConfig(String),
}

/// A point strictly inside the open unit ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoincarePoint {
    coords: Vec<f64>,
}

impl PoincarePoint {
    /// Validating constructor: all coordinates finite, squared norm < 1.
    pub fn new(coords: Vec<f64>) -> Result<Self, GeometryError> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let norm_sq: f64 = coords.iter().map(|c| c * c).sum();
        if norm_sq >= 1.0 {
            return Err(GeometryError::OutsideBall { norm_sq });
        }
        Ok(PoincarePoint { coords })
    }

    /// The origin of an n-dimensional ball.
    pub fn origin(dim: usize) -> Self {
        PoincarePoint {
            coords: vec![0.0; dim],
        }
    }

    /// Wraps raw operation output: rejects non-finite coordinates and
    /// radially rescales anything that crept past the norm safety floor.
    fn from_operation(mut coords: Vec<f64>) -> Result<Self, GeometryError> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::NumericOverflow);
        }
        let norm_sq: f64 = coords.iter().map(|c| c * c).sum();
        let ceiling = 1.0 - NORM_MARGIN * f64::EPSILON;
        if norm_sq > ceiling {
            let scale = (ceiling / norm_sq).sqrt();
            for c in &mut coords {
                *c *= scale;
            }
        }
        Ok(PoincarePoint { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// The additive inverse `-a` (reflection through the origin).
    pub fn negated(&self) -> Self {
        PoincarePoint {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

fn check_dims(a: &PoincarePoint, b: &PoincarePoint) -> Result<(), GeometryError> {
    if a.dim() != b.dim() {
        return Err(GeometryError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Möbius addition `a ⊕ b`:
///
/// ```text
///           (1 + 2<a,b> + ||b||^2) a + (1 - ||a||^2) b
/// a ⊕ b  =  -------------------------------------------
///               1 + 2<a,b> + ||a||^2 ||b||^2
/// ```
pub fn mobius_add(a: &PoincarePoint, b: &PoincarePoint) -> Result<PoincarePoint, GeometryError> {
    check_dims(a, b)?;
    let ab = dot(&a.coords, &b.coords);
    let na = a.norm_sq();
    let nb = b.norm_sq();
    let denom = 1.0 + 2.0 * ab + na * nb;
    if !denom.is_finite() || denom <= MIN_MOBIUS_DENOMINATOR {
        return Err(GeometryError::NumericOverflow);
    }
    let ca = (1.0 + 2.0 * ab + nb) / denom;
    let cb = (1.0 - na) / denom;
    let coords = a
        .coords
        .iter()
        .zip(&b.coords)
        .map(|(x, y)| ca * x + cb * y)
        .collect();
    PoincarePoint::from_operation(coords)
}

/// Hyperbolic distance `d(a, b) = 2 tanh^-1(||(-a) ⊕ b||)`.
///
/// Computed through the algebraically identical form
/// `2 asinh(sqrt(||a-b||^2 / ((1-||a||^2)(1-||b||^2))))` — the inverse-sinh
/// rewrite of `acosh(1 + 2||a-b||^2 / ((1-||a||^2)(1-||b||^2)))`. It stays
/// representable for deep points whose Möbius form would saturate
/// `tanh^-1` at the working precision, and unlike the `acosh(1 + x)`
/// route it keeps full precision for nearby points, where adding the
/// tiny `x` to 1 would discard half of its digits.
pub fn distance(a: &PoincarePoint, b: &PoincarePoint) -> Result<f64, GeometryError> {
    check_dims(a, b)?;
    let diff_sq: f64 = a
        .coords
        .iter()
        .zip(&b.coords)
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    let da = 1.0 - a.norm_sq();
    let db = 1.0 - b.norm_sq();
    if da <= 0.0 || db <= 0.0 {
        // Unreachable for points built through the public constructors,
        // which enforce the ball invariant.
        return Err(GeometryError::NumericOverflow);
    }
    let x = (diff_sq / (da * db)).sqrt();
    if !x.is_finite() {
        return Err(GeometryError::NumericOverflow);
    }
    Ok(2.0 * x.asinh())
}

/// Conformal factor `lambda_a = 2 / (1 - ||a||^2)`, the local scaling
/// between Euclidean and hyperbolic lengths at `a`.
pub fn conformal_factor(a: &PoincarePoint) -> f64 {
    2.0 / (1.0 - a.norm_sq())
}

/// The Möbius translation `x -> a ⊕ x`, an isometry of the ball moving
/// the origin to `a`. `translate(-a, .)` inverts `translate(a, .)`.
pub fn translate(a: &PoincarePoint, x: &PoincarePoint) -> Result<PoincarePoint, GeometryError> {
    mobius_add(a, x)
}

/// Per-edge hyperbolic length:
/// `tau = (1 / (1.3 * max_path_length)) * ln((2 - eps/2) / (eps/2))`.
///
/// The log term is the total distance budget representable at precision
/// `eps`; dividing by 1.3-times the longest root-to-leaf path spends it
/// across the deepest branch with margin.
pub fn compute_tau(max_path_length: u32, epsilon: f64) -> f64 {
    assert!(max_path_length >= 1, "max_path_length must be at least 1");
    assert!(
        epsilon > 0.0 && epsilon < 1.0,
        "epsilon must lie strictly between 0 and 1"
    );
    let budget = ((2.0 - epsilon / 2.0) / (epsilon / 2.0)).ln();
    budget / (1.3 * max_path_length as f64)
}

/// Smallest multiple of 10, n, with `2^floor(log2 n) > max_degree`.
///
/// The strict inequality leaves room for one reserved direction (the
/// edge back to the parent) on top of a node's children.
pub fn select_dimension(max_degree: usize) -> usize {
    assert!(max_degree >= 1, "max_degree must be at least 1");
    let mut n = 10usize;
    while (1usize << n.ilog2()) <= max_degree {
        n += 10;
    }
    n
}

/// Hyperparameters of a constructive embedding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingConfig {
    /// Ball dimension n (at least 2).
    pub dimension: usize,
    /// Hyperbolic length assigned to every tree edge.
    pub tau: f64,
    /// Machine precision the tau budget was computed for.
    pub epsilon: f64,
    /// Longest root-to-leaf path the budget is spread over.
    pub max_path_length: u32,
}

impl EmbeddingConfig {
    pub fn new(
        dimension: usize,
        tau: f64,
        epsilon: f64,
        max_path_length: u32,
    ) -> Result<Self, GeometryError> {
        if dimension < 2 {
            return Err(GeometryError::InvalidConfig(format!(
                "dimension must be at least 2, got {dimension}"
            )));
        }
        if !(tau.is_finite() && tau > 0.0) {
            return Err(GeometryError::InvalidConfig(format!(
                "tau must be positive and finite, got {tau}"
            )));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(GeometryError::InvalidConfig(format!(
                "epsilon must lie in (0, 1), got {epsilon}"
            )));
        }
        if max_path_length < 1 {
            return Err(GeometryError::InvalidConfig(
                "max_path_length must be at least 1".to_owned(),
            ));
        }
        Ok(EmbeddingConfig {
            dimension,
            tau,
            epsilon,
            max_path_length,
        })
    }

    /// Default configuration for a tree: `tau` from the tree's depth at
    /// double precision. A zero depth (single-node tree) is budgeted as
    /// depth 1 so tau stays finite.
    pub fn for_tree_depth(depth: usize, dimension: usize) -> Result<Self, GeometryError> {
        let l = depth.max(1) as u32;
        Self::new(dimension, compute_tau(l, f64::EPSILON), f64::EPSILON, l)
    }
}
