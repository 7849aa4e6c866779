//! Unit-direction generators for child placement.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::EmbedError;

/// Minimum pairwise chordal distance used inside the repulsion energy so a
/// coincident pair contributes a huge but finite force instead of dividing
/// by zero.
const REPULSION_DISTANCE_FLOOR: f64 = 1e-9;

/// Number of gradient steps the uniform optimizer always takes.
const OPTIMIZER_ITERATIONS: usize = 450;

/// Initial learning rate; divided by ten twice over the schedule.
const OPTIMIZER_INITIAL_LR: f64 = 0.01;

/// Iterations at which the learning rate drops by a factor of ten.
const OPTIMIZER_LR_DROPS: [usize; 2] = [150, 300];

/// A set of unit vectors in R^n used as outgoing edge directions.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    dimension: usize,
    directions: Vec<Vec<f64>>,
}

impl DirectionSet {
    fn new(dimension: usize, directions: Vec<Vec<f64>>) -> Self {
        debug_assert!(directions.iter().all(|d| d.len() == dimension));
        DirectionSet {
            dimension,
            directions,
        }
    }

    /// Ambient dimension of every direction.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of directions in the set.
    pub fn len(&self) -> usize {
        self.directions.len()
    }

    /// True when the set holds no directions.
    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    /// Direction at `index` as a unit-vector slice.
    pub fn get(&self, index: usize) -> &[f64] {
        &self.directions[index]
    }

    /// Iterates over the directions in order.
    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.directions.iter().map(|d| d.as_slice())
    }

    /// Reflects every direction through the hyperplane that maps `first_to`
    /// onto the set's first direction, then drops that first direction.
    ///
    /// Used by the Hadamard strategy at non-root nodes: the leading row is
    /// sacrificed as the "back to parent" slot, the whole frame is rigidly
    /// rotated so that slot coincides with the actual parent direction, and
    /// the remaining rows become child directions.  The reflection is a
    /// Householder map, so pairwise angles inside the set are preserved
    /// exactly.
    pub fn aligned_tail(&self, first_to: &[f64]) -> DirectionSet {
        assert_eq!(first_to.len(), self.dimension, "direction dimension mismatch");
        assert!(!self.directions.is_empty(), "cannot align an empty set");
        let lead = &self.directions[0];
        // Householder vector w = lead - target; H maps lead onto target.
        let w: Vec<f64> = lead.iter().zip(first_to).map(|(l, t)| l - t).collect();
        let w_norm_sq: f64 = w.iter().map(|c| c * c).sum();
        let tail = self.directions[1..].to_vec();
        if w_norm_sq < 1e-24 {
            // Already aligned; reflection would be numerically degenerate.
            return DirectionSet::new(self.dimension, tail);
        }
        let reflected = tail
            .into_iter()
            .map(|d| {
                let scale = 2.0 * dot(&d, &w) / w_norm_sq;
                d.iter().zip(&w).map(|(c, wc)| c - scale * wc).collect()
            })
            .collect();
        DirectionSet::new(self.dimension, reflected)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize_in_place(v: &mut [f64]) {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        for c in v.iter_mut() {
            *c /= norm;
        }
    }
}

/// Largest power of two not exceeding `dimension`: the order of the
/// Sylvester Hadamard matrix that fits, and therefore the number of
/// mutually orthogonal directions available.
pub(crate) fn hadamard_capacity(dimension: usize) -> usize {
    assert!(dimension >= 1, "dimension must be at least 1");
    1usize << dimension.ilog2()
}

/// First `count` rows of the Sylvester Hadamard matrix of the largest order
/// fitting in `dimension`, zero-padded to `dimension` coordinates and scaled
/// to unit length.
///
/// Row `i`, column `j` of the order-`m` Sylvester matrix is
/// `(-1)^popcount(i & j)`; distinct rows are orthogonal.  Row 0 is the
/// all-ones direction.  Fails when `count` exceeds the matrix order.
pub fn hadamard_directions(dimension: usize, count: usize) -> Result<DirectionSet, EmbedError> {
    let order = hadamard_capacity(dimension);
    if count > order {
        return Err(EmbedError::DegreeExceedsCapacity {
            node: String::new(),
            required: count,
            dimension,
            capacity: order,
        });
    }
    let scale = 1.0 / (order as f64).sqrt();
    let directions = (0..count)
        .map(|row| {
            let mut v = vec![0.0; dimension];
            for (col, slot) in v.iter_mut().enumerate().take(order) {
                let sign = if (row & col).count_ones() % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                *slot = sign * scale;
            }
            v
        })
        .collect();
    Ok(DirectionSet::new(dimension, directions))
}

/// Spreads `count` unit directions over the sphere in R^`dimension` by
/// minimizing the inverse-distance repulsion energy sum(1 / |x_i - x_j|)
/// with projected gradient descent.
///
/// When `anchor` is given it joins the energy as a frozen extra particle:
/// it pushes the free directions away (reserving a cone around itself, used
/// for the parent direction at non-root nodes) but never moves and is not
/// part of the returned set.
///
/// The run is fully deterministic: initial positions are unit-normalized
/// standard Gaussian draws from a ChaCha stream seeded with `seed`, and the
/// schedule is fixed at 450 steps with the rate cut tenfold at steps 150
/// and 300.
pub fn optimize_uniform_directions(
    dimension: usize,
    count: usize,
    anchor: Option<&[f64]>,
    seed: u64,
) -> DirectionSet {
    assert!(dimension >= 1, "dimension must be at least 1");
    if let Some(a) = anchor {
        assert_eq!(a.len(), dimension, "anchor dimension mismatch");
    }
    if count == 0 {
        return DirectionSet::new(dimension, Vec::new());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Vec<f64>> = (0..count)
        .map(|_| loop {
            let mut v: Vec<f64> = (0..dimension)
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect();
            let norm_sq = dot(&v, &v);
            if norm_sq > 1e-24 {
                normalize_in_place(&mut v);
                break v;
            }
        })
        .collect();

    let anchor: Option<Vec<f64>> = anchor.map(|a| {
        let mut v = a.to_vec();
        normalize_in_place(&mut v);
        v
    });

    let mut gradients = vec![vec![0.0; dimension]; count];
    for iteration in 0..OPTIMIZER_ITERATIONS {
        let drops = OPTIMIZER_LR_DROPS
            .iter()
            .filter(|&&at| iteration >= at)
            .count();
        let lr = OPTIMIZER_INITIAL_LR / 10f64.powi(drops as i32);

        for g in gradients.iter_mut() {
            g.iter_mut().for_each(|c| *c = 0.0);
        }
        // Pairwise repulsion between free points: the energy term 1/d
        // contributes a force (x_i - x_j)/d^3 pushing the pair apart.
        for i in 0..count {
            for j in (i + 1)..count {
                let force = repulsion_force(&points[i], &points[j]);
                for (c, f) in gradients[i].iter_mut().zip(&force) {
                    *c += f;
                }
                for (c, f) in gradients[j].iter_mut().zip(&force) {
                    *c -= f;
                }
            }
        }
        // The frozen anchor repels every free point but absorbs no force.
        if let Some(a) = &anchor {
            for i in 0..count {
                let force = repulsion_force(&points[i], a);
                for (c, f) in gradients[i].iter_mut().zip(&force) {
                    *c += f;
                }
            }
        }
        for (p, g) in points.iter_mut().zip(&gradients) {
            for (c, f) in p.iter_mut().zip(g) {
                *c += lr * f;
            }
            normalize_in_place(p);
        }
    }

    DirectionSet::new(dimension, points)
}

/// Force on `x` exerted by `other` under the 1/d energy: (x - other)/d^3,
/// with the distance floored to keep coincident pairs finite.
fn repulsion_force(x: &[f64], other: &[f64]) -> Vec<f64> {
    let diff: Vec<f64> = x.iter().zip(other).map(|(a, b)| a - b).collect();
    let dist = dot(&diff, &diff).sqrt().max(REPULSION_DISTANCE_FLOOR);
    let inv_cube = 1.0 / (dist * dist * dist);
    diff.into_iter().map(|c| c * inv_cube).collect()
}
