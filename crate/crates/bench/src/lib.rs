//! Benchmark inputs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use colorfold_core::corpus::{random_facet_sum, random_vertex_sum};
use colorfold_core::SimplePolytope;

/// Facet sums of `n` summands, reproducible from `seed`.
pub fn facet_sums(seed: u64, count: usize, n: usize) -> Vec<SimplePolytope> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_facet_sum(&mut rng, n)).collect()
}

/// Vertex sums of `n` summands, reproducible from `seed`.
pub fn vertex_sums(seed: u64, count: usize, n: usize) -> Vec<SimplePolytope> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_vertex_sum(&mut rng, n).0).collect()
}
