//! Combinatorial isomorphism through a canonical code of the facet
//! adjacency graph with its rotation system.
//!
//! For every start (facet, neighbour, direction) a breadth-first traversal
//! labels the facets, recording each facet's degree and the labels of its
//! neighbours read in rotation order from the facet that discovered it. The
//! smallest code over all starts and both orientations is canonical.

use super::{FacetId, SimplePolytope};

/// Canonical code; equal codes mean isomorphic polytopes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u32>);

fn code_from(p: &SimplePolytope, start: FacetId, first: FacetId, forward: bool, best: Option<&[u32]>) -> Option<(Vec<u32>, Vec<u32>)> {
    let m = p.m();
    let mut label = vec![u32::MAX; m];
    let mut order = vec![start];
    let mut from = vec![usize::MAX; m];
    label[start] = 0;
    from[start] = first;
    let mut code = Vec::with_capacity(m + 2 * p.num_edges());
    let mut i = 0;
    let mut smaller = false;
    let mut push = |code: &mut Vec<u32>, x: u32| -> bool {
        // returns false once this code is known to exceed `best`
        let pos = code.len();
        code.push(x);
        if smaller {
            return true;
        }
        if let Some(b) = best {
            match x.cmp(&b[pos]) {
                std::cmp::Ordering::Less => smaller = true,
                std::cmp::Ordering::Greater => return false,
                std::cmp::Ordering::Equal => {}
            }
        }
        true
    };
    while i < order.len() {
        let x = order[i];
        let cyc = p.neighbours(x);
        let d = cyc.len();
        if !push(&mut code, d as u32 + m as u32) {
            return None;
        }
        let pos = cyc.iter().position(|&y| y == from[x]).unwrap();
        for t in 0..d {
            let y = if forward { cyc[(pos + t) % d] } else { cyc[(pos + d - t) % d] };
            if label[y] == u32::MAX {
                label[y] = order.len() as u32;
                order.push(y);
                from[y] = x;
            }
            if !push(&mut code, label[y]) {
                return None;
            }
        }
        i += 1;
    }
    Some((code, label))
}

fn minimal(p: &SimplePolytope) -> (Vec<u32>, Vec<u32>) {
    let mut best: Option<(Vec<u32>, Vec<u32>)> = None;
    for f in 0..p.m() {
        for &g in p.neighbours(f) {
            for forward in [true, false] {
                if let Some(c) = code_from(p, f, g, forward, best.as_ref().map(|b| b.0.as_slice())) {
                    if best.as_ref().is_none_or(|b| c.0 < b.0) {
                        best = Some(c);
                    }
                }
            }
        }
    }
    best.unwrap()
}

/// Canonical code of `p` up to combinatorial equivalence (mirror images
/// included).
pub fn canonical_code(p: &SimplePolytope) -> CanonicalCode {
    CanonicalCode(minimal(p).0)
}

/// A facet bijection `p -> q` carrying vertices to vertices, if one exists.
pub fn is_isomorphic(p: &SimplePolytope, q: &SimplePolytope) -> Option<Vec<FacetId>> {
    if p.m() != q.m() || p.num_vertices() != q.num_vertices() {
        return None;
    }
    let mut sp = p.facet_sizes();
    let mut sq = q.facet_sizes();
    sp.sort_unstable();
    sq.sort_unstable();
    if sp != sq {
        return None;
    }
    let (cp, lp) = minimal(p);
    let (cq, lq) = minimal(q);
    if cp != cq {
        return None;
    }
    let mut by_label = vec![0; q.m()];
    for (g, &l) in lq.iter().enumerate() {
        by_label[l as usize] = g;
    }
    let map: Vec<FacetId> = lp.iter().map(|&l| by_label[l as usize]).collect();
    debug_assert!(p.vertices().iter().all(|v| q.has_vertex(v.map(|f| map[f]))));
    Some(map)
}
