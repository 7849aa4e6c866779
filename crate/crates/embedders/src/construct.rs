//! Root-outward placement of tree nodes in the ball.

use hierarchy_core::Hierarchy;
use poincare_geometry::{mobius_add, EmbeddingConfig, PoincarePoint};

use crate::directions::{
    hadamard_capacity, hadamard_directions, optimize_uniform_directions, DirectionSet,
};
use crate::{EmbedError, EmbeddingResult, Strategy};

pub(crate) fn run(
    hierarchy: &Hierarchy,
    config: &EmbeddingConfig,
    strategy: Strategy,
    seed: u64,
) -> Result<EmbeddingResult, EmbedError> {
    let dim = config.dimension;
    let capacity = hadamard_capacity(dim);
    // Every internal node needs one direction per child, plus one reserved
    // for the incoming parent edge everywhere except the root.  Both
    // strategies enforce the same cap so they accept identical inputs.
    for v in 0..hierarchy.len() {
        let child_count = hierarchy.children(v).len();
        if child_count == 0 {
            continue;
        }
        let required = child_count + usize::from(v != hierarchy.root());
        if required > capacity {
            return Err(EmbedError::DegreeExceedsCapacity {
                node: hierarchy.name(v).to_string(),
                required,
                dimension: dim,
                capacity,
            });
        }
    }

    // Children sit at hyperbolic distance tau from their parent, which in
    // the parent-centred chart is the Euclidean radius tanh(tau / 2).
    let edge_radius = (config.tau / 2.0).tanh();
    let mut points: Vec<Option<PoincarePoint>> = vec![None; hierarchy.len()];
    points[hierarchy.root()] = Some(PoincarePoint::origin(dim));

    // Node indices are in pre-order, so a parent is always placed before
    // its children and a single forward sweep suffices.
    for v in 0..hierarchy.len() {
        let children = hierarchy.children(v);
        if children.is_empty() {
            continue;
        }
        let base = points[v]
            .clone()
            .expect("pre-order sweep placed every parent first");

        let child_directions: DirectionSet = if v == hierarchy.root() {
            match strategy {
                Strategy::Hadamard => hadamard_directions(dim, children.len())?,
                Strategy::OptimizedUniform => {
                    optimize_uniform_directions(dim, children.len(), None, node_seed(seed, v))
                }
            }
        } else {
            // Unit direction from v to its parent after translating v to
            // the origin; children must keep clear of this direction so
            // subtrees do not fold back toward the root.
            let parent = hierarchy
                .parent(v)
                .expect("non-root node has a parent");
            let parent_point = points[parent]
                .clone()
                .expect("pre-order sweep placed every parent first");
            let parent_dir = direction_to_parent(&base, &parent_point);
            match strategy {
                Strategy::Hadamard => {
                    hadamard_directions(dim, children.len() + 1)?.aligned_tail(&parent_dir)
                }
                Strategy::OptimizedUniform => optimize_uniform_directions(
                    dim,
                    children.len(),
                    Some(&parent_dir),
                    node_seed(seed, v),
                ),
            }
        };

        for (slot, &child) in children.iter().enumerate() {
            let offset: Vec<f64> = child_directions
                .get(slot)
                .iter()
                .map(|c| c * edge_radius)
                .collect();
            let local = PoincarePoint::new(offset)?;
            points[child] = Some(mobius_add(&base, &local)?);
        }
    }

    let points: Vec<PoincarePoint> = points
        .into_iter()
        .map(|p| p.expect("sweep placed every node"))
        .collect();
    Ok(EmbeddingResult {
        nodes: hierarchy.names().to_vec(),
        points,
        config: config.clone(),
        strategy,
        seed,
    })
}

/// Unit direction from `at` toward `target` after translating `at` to the
/// origin: the direction of (-at) + target under the ball's vector addition.
/// Expanding that sum and rewriting the inner product through the squared
/// coordinate difference leaves only same-sign terms,
///
///   (-a) (+) t  is parallel to  (1 - |a|^2) * (t - a) - |t - a|^2 * a,
///
/// so the result keeps its digits even when both points hug the boundary,
/// where the textbook denominator 1 - 2<a,t> + |a|^2|t|^2 collapses to the
/// rounding noise of its unit-sized terms and can even come out negative.
fn direction_to_parent(at: &PoincarePoint, target: &PoincarePoint) -> Vec<f64> {
    let slack = 1.0 - at.norm_sq();
    let diff: Vec<f64> = target
        .coords()
        .iter()
        .zip(at.coords())
        .map(|(t, a)| t - a)
        .collect();
    let diff_sq: f64 = diff.iter().map(|c| c * c).sum();
    let numerator: Vec<f64> = diff
        .iter()
        .zip(at.coords())
        .map(|(d, a)| slack * d - diff_sq * a)
        .collect();
    unit_or_first_axis(&numerator)
}

/// Normalizes `v`; falls back to the first coordinate axis if the vector is
/// too small to carry a direction (cannot happen for exact arithmetic, but
/// keeps the sweep total under extreme rounding).
fn unit_or_first_axis(v: &[f64]) -> Vec<f64> {
    let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    if norm > 1e-150 {
        v.iter().map(|c| c / norm).collect()
    } else {
        let mut axis = vec![0.0; v.len()];
        axis[0] = 1.0;
        axis
    }
}

/// Deterministic per-node stream seed: a splitmix-style mix of the run seed
/// and the node index, so sibling direction sets are independent but every
/// run with the same seed reproduces bit-identical coordinates.
fn node_seed(seed: u64, node: usize) -> u64 {
    let mut z = seed ^ (node as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
