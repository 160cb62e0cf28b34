//! Random polytopes built by connected sums, for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::polytope::catalog::*;
use crate::polytope::{
    connected_sum_facets, connected_sum_vertices, dihedral_identification, FacetId, SimplePolytope,
};

/// Summands for sums along vertices.
pub fn vertex_sum_pool() -> Vec<SimplePolytope> {
    let mut v = vec![simplex(), cube()];
    v.extend((5..=7).map(|k| prism(k).unwrap()));
    v.push(associahedron3());
    v.push(dodecahedron());
    v
}

/// Summands for sums along quadrangles.
pub fn facet_sum_pool() -> Vec<SimplePolytope> {
    let mut v: Vec<_> = (5..=8).map(|k| prism(k).unwrap()).collect();
    v.push(associahedron3());
    v
}

/// Iterated connected sum at random vertices of `n` random summands.
/// Returns the sum and the summands used.
pub fn random_vertex_sum<R: Rng>(rng: &mut R, n: usize) -> (SimplePolytope, Vec<SimplePolytope>) {
    let pool = vertex_sum_pool();
    let first = pool.choose(rng).unwrap().clone();
    let mut used = vec![first.clone()];
    let mut acc = first;
    for _ in 1..n {
        let s = pool.choose(rng).unwrap();
        let v = *acc.vertices().choose(rng).unwrap();
        let w = *s.vertices().choose(rng).unwrap();
        let mut perm = w.to_vec();
        perm.shuffle(rng);
        let matching: Vec<(FacetId, FacetId)> = v.iter().copied().zip(perm).collect();
        acc = connected_sum_vertices(&acc, v, s, w, &matching).unwrap().0;
        used.push(s.clone());
    }
    (acc, used)
}

fn quadrangles(p: &SimplePolytope) -> Vec<FacetId> {
    (0..p.m()).filter(|&f| p.is_quadrangle(f)).collect()
}

/// Iterated connected sum along random quadrangles with random (twisted or
/// untwisted) identifications of `n` random summands.
pub fn random_facet_sum<R: Rng>(rng: &mut R, n: usize) -> SimplePolytope {
    let pool = facet_sum_pool();
    let mut acc = pool.choose(rng).unwrap().clone();
    for _ in 1..n {
        let s = pool.choose(rng).unwrap();
        let Some(&f) = quadrangles(&acc).choose(rng) else { break };
        let g = *quadrangles(s).choose(rng).unwrap();
        let id = dihedral_identification(&acc, f, s, g, rng.gen_range(0..4), rng.gen());
        acc = connected_sum_facets(&acc, f, s, g, &id).unwrap().0;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sums_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let (p, used) = random_vertex_sum(&mut rng, 3);
            let expect: usize = used.iter().map(|u| u.m()).sum::<usize>() - 3 * (used.len() - 1);
            assert_eq!(p.m(), expect);
            let q = random_facet_sum(&mut rng, 3);
            assert!(crate::decomposition::is_flag(&q));
        }
    }
}
