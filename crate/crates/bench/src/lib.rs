//! Fixed instances shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shadow_core::constructions::{
    embed_perturbed_simplex, interior_point_three_balls, regular_simplex_system, InteriorPointParams,
};
use shadow_core::{Ball, ShadowInstance, Vector};

pub fn interior_point() -> ShadowInstance {
    interior_point_three_balls(&InteriorPointParams { r: 1.0, h: 0.9 })
        .expect("h = 0.9 is above the threshold")
        .instance
}

pub fn regular(dim: usize) -> ShadowInstance {
    regular_simplex_system(dim, true).expect("dimension at least 2")
}

pub fn tangent_simplex(dim: usize) -> ShadowInstance {
    embed_perturbed_simplex(dim, 0.01)
        .expect("small perturbation embeds")
        .instance
}

/// `k` balls around the origin at random directions, distances in [1, 3]
/// and angular radii up to asin 0.8.
pub fn random_instance(dim: usize, k: usize, seed: u64) -> ShadowInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let balls = (0..k)
        .map(|_| {
            let mut u: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm = u.iter().map(|c| c * c).sum::<f64>().sqrt();
            u.iter_mut().for_each(|c| *c /= norm);
            let dist = rng.random_range(1.0..3.0);
            let frac = rng.random_range(0.2..0.8);
            Ball::new(&Vector::from(u) * dist, dist * frac, rng.random_bool(0.5)).expect("positive radius")
        })
        .collect();
    ShadowInstance::new(Vector::zeros(dim), balls).expect("consistent dimensions")
}
