//! Vertex and edge truncation, shrinking triangles, connected sums.

use std::collections::HashMap;

use super::{sorted, FacetId, PolytopeError, SimplePolytope, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurgeryError {
    #[error("{0:?} is not a vertex")]
    NoSuchVertex([FacetId; 3]),
    #[error("facets {0} and {1} are not adjacent")]
    NoSuchEdge(FacetId, FacetId),
    #[error("facet {0} is not a triangle")]
    NotATriangle(FacetId),
    #[error("shrinking facet {0} would not leave a polytope")]
    NotShrinkable(FacetId),
    #[error("vertex matching is not a bijection between the facets of the two vertices")]
    BadMatching,
    #[error("facet {0} is not surrounded by a belt")]
    NotSurroundedByBelt(FacetId),
    #[error("facets have different numbers of sides ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("identification does not preserve the cyclic order of the surrounding belts")]
    BadIdentification,
    #[error("facet index {0} out of range")]
    FacetOutOfRange(FacetId),
    #[error("surgery produced an invalid polytope: {0}")]
    Invalid(#[from] PolytopeError),
}

/// How the facets of the two summands of a connected sum appear in the
/// result. `left[f]` (resp. `right[f]`) is the result facet carrying facet
/// `f` of the first (resp. second) summand; deleted facets map to `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumTracking {
    pub left: Vec<Option<FacetId>>,
    pub right: Vec<Option<FacetId>>,
}

/// Truncates vertex `v`. The new triangle gets id `m`.
pub fn cut_vertex(p: &SimplePolytope, v: [FacetId; 3]) -> Result<(SimplePolytope, FacetId), SurgeryError> {
    let v = sorted(v);
    if !p.has_vertex(v) {
        return Err(SurgeryError::NoSuchVertex(v));
    }
    let n = p.m();
    let mut t: Vec<[usize; 3]> = p.vertices().iter().copied().filter(|&u| u != v).collect();
    t.extend([[v[0], v[1], n], [v[1], v[2], n], [v[0], v[2], n]]);
    Ok((SimplePolytope::new(n + 1, t)?, n))
}

/// Truncates the edge between adjacent facets `a` and `b`, which stop being
/// adjacent. The new quadrangle gets id `m`.
pub fn cut_edge(p: &SimplePolytope, a: FacetId, b: FacetId) -> Result<(SimplePolytope, FacetId), SurgeryError> {
    if a >= p.m() || b >= p.m() {
        return Err(SurgeryError::FacetOutOfRange(a.max(b)));
    }
    let [u, w] = p.edge_vertices(a, b).ok_or(SurgeryError::NoSuchEdge(a, b))?;
    let other = |x: Vertex| x.into_iter().find(|&f| f != a && f != b).unwrap();
    let (c, d) = (other(u), other(w));
    let n = p.m();
    let mut t: Vec<[usize; 3]> = p.vertices().iter().copied().filter(|&x| x != u && x != w).collect();
    t.extend([[a, c, n], [b, c, n], [a, d, n], [b, d, n]]);
    Ok((SimplePolytope::new(n + 1, t)?, n))
}

/// Shrinks the triangle `f` to a vertex. Returns the result and, for every
/// old facet, its new id (`None` for `f`).
pub fn shrink_triangle(
    p: &SimplePolytope,
    f: FacetId,
) -> Result<(SimplePolytope, Vec<Option<FacetId>>), SurgeryError> {
    if f >= p.m() {
        return Err(SurgeryError::FacetOutOfRange(f));
    }
    if p.facet_size(f) != 3 {
        return Err(SurgeryError::NotATriangle(f));
    }
    let nb = p.neighbours(f);
    if p.m() == 4 || p.has_vertex([nb[0], nb[1], nb[2]]) {
        return Err(SurgeryError::NotShrinkable(f));
    }
    let map: Vec<Option<FacetId>> =
        (0..p.m()).map(|g| (g != f).then(|| if g < f { g } else { g - 1 })).collect();
    let mut t: Vec<[usize; 3]> = p
        .vertices()
        .iter()
        .filter(|v| !v.contains(&f))
        .map(|v| v.map(|g| map[g].unwrap()))
        .collect();
    t.push([nb[0], nb[1], nb[2]].map(|g| map[g].unwrap()));
    Ok((SimplePolytope::new(p.m() - 1, t)?, map))
}

/// Connected sum at vertices `v` of `p` and `w` of `q`: both vertices are
/// removed and the facets through them are merged along `matching`, a list
/// of pairs (facet at `v`, facet at `w`). The result has
/// `m_p + m_q - 3` facets; facets of `p` keep their ids.
pub fn connected_sum_vertices(
    p: &SimplePolytope,
    v: [FacetId; 3],
    q: &SimplePolytope,
    w: [FacetId; 3],
    matching: &[(FacetId, FacetId)],
) -> Result<(SimplePolytope, SumTracking), SurgeryError> {
    let (v, w) = (sorted(v), sorted(w));
    if !p.has_vertex(v) {
        return Err(SurgeryError::NoSuchVertex(v));
    }
    if !q.has_vertex(w) {
        return Err(SurgeryError::NoSuchVertex(w));
    }
    if matching.len() != 3 {
        return Err(SurgeryError::BadMatching);
    }
    let mut lefts: Vec<_> = matching.iter().map(|x| x.0).collect();
    let mut rights: Vec<_> = matching.iter().map(|x| x.1).collect();
    lefts.sort();
    rights.sort();
    if lefts != v || rights != w {
        return Err(SurgeryError::BadMatching);
    }
    let merged: HashMap<FacetId, FacetId> = matching.iter().map(|&(a, b)| (b, a)).collect();
    let left: Vec<Option<FacetId>> = (0..p.m()).map(Some).collect();
    let mut right = vec![None; q.m()];
    let mut next = p.m();
    for (g, slot) in right.iter_mut().enumerate() {
        *slot = Some(match merged.get(&g) {
            Some(&a) => a,
            None => {
                next += 1;
                next - 1
            }
        });
    }
    let mut t: Vec<[usize; 3]> = p.vertices().iter().copied().filter(|&x| x != v).collect();
    t.extend(q.vertices().iter().filter(|&&x| x != w).map(|x| x.map(|g| right[g].unwrap())));
    let r = SimplePolytope::new(next, t)?;
    Ok((r, SumTracking { left, right }))
}

/// Pairs neighbour `t` of `fi` (in the rotation order of `p`) with neighbour
/// `shift + t` (or `shift - t` when `reflect`) of `fj` in `q`.
pub fn dihedral_identification(
    p: &SimplePolytope,
    fi: FacetId,
    q: &SimplePolytope,
    fj: FacetId,
    shift: usize,
    reflect: bool,
) -> Vec<(FacetId, FacetId)> {
    let c = p.neighbours(fi);
    let d = q.neighbours(fj);
    let k = d.len();
    c.iter()
        .enumerate()
        .map(|(t, &a)| {
            let s = if reflect { (shift + k * (t / k + 1) - t) % k } else { (shift + t) % k };
            (a, d[s])
        })
        .collect()
}

/// Connected sum along the `k`-gons `fi` of `p` and `fj` of `q`, each
/// surrounded by a belt. Both are deleted and the facets of the two belts
/// are merged along `identification`, which must respect their cyclic
/// order (possibly reversing it). The result has `m_p + m_q - k - 2` facets.
pub fn connected_sum_facets(
    p: &SimplePolytope,
    fi: FacetId,
    q: &SimplePolytope,
    fj: FacetId,
    identification: &[(FacetId, FacetId)],
) -> Result<(SimplePolytope, SumTracking), SurgeryError> {
    if fi >= p.m() {
        return Err(SurgeryError::FacetOutOfRange(fi));
    }
    if fj >= q.m() {
        return Err(SurgeryError::FacetOutOfRange(fj));
    }
    let c = p.neighbours(fi);
    let d = q.neighbours(fj);
    if c.len() != d.len() {
        return Err(SurgeryError::SizeMismatch(c.len(), d.len()));
    }
    if !p.is_belt_cycle(c) {
        return Err(SurgeryError::NotSurroundedByBelt(fi));
    }
    if !q.is_belt_cycle(d) {
        return Err(SurgeryError::NotSurroundedByBelt(fj));
    }
    let k = c.len();
    let map: HashMap<FacetId, FacetId> = identification.iter().copied().collect();
    if identification.len() != k || map.len() != k || c.iter().any(|a| !map.contains_key(a)) {
        return Err(SurgeryError::BadIdentification);
    }
    let image: Vec<usize> = c
        .iter()
        .map(|a| d.iter().position(|&b| b == map[a]))
        .collect::<Option<_>>()
        .ok_or(SurgeryError::BadIdentification)?;
    let forward = (0..k).all(|t| image[t] == (image[0] + t) % k);
    let backward = (0..k).all(|t| (image[t] + t) % k == image[0]);
    if !forward && !backward {
        return Err(SurgeryError::BadIdentification);
    }

    let left: Vec<Option<FacetId>> =
        (0..p.m()).map(|g| (g != fi).then(|| if g < fi { g } else { g - 1 })).collect();
    let inverse: HashMap<FacetId, FacetId> = map.iter().map(|(&a, &b)| (b, a)).collect();
    let mut right = vec![None; q.m()];
    let mut next = p.m() - 1;
    for (g, slot) in right.iter_mut().enumerate() {
        if g == fj {
            continue;
        }
        *slot = Some(match inverse.get(&g) {
            Some(&a) => left[a].unwrap(),
            None => {
                next += 1;
                next - 1
            }
        });
    }
    let mut t: Vec<[usize; 3]> = p
        .vertices()
        .iter()
        .filter(|x| !x.contains(&fi))
        .map(|x| x.map(|g| left[g].unwrap()))
        .collect();
    t.extend(q.vertices().iter().filter(|x| !x.contains(&fj)).map(|x| x.map(|g| right[g].unwrap())));
    let r = SimplePolytope::new(next, t)?;
    Ok((r, SumTracking { left, right }))
}

#[cfg(test)]
mod tests {
    use super::super::catalog::*;
    use super::*;

    #[test]
    fn cut_vertex_of_prism3() {
        let p = prism(3).unwrap();
        let (r, n) = cut_vertex(&p, [0, 2, 3]).unwrap();
        assert_eq!(r.m(), 6);
        assert_eq!(r.facet_size(n), 3);
        assert!(r.is_belt_cycle(r.neighbours(n)));
        assert!(matches!(cut_vertex(&p, [0, 1, 2]), Err(SurgeryError::NoSuchVertex(_))));
    }

    #[test]
    fn shrink_undoes_cut() {
        let p = dodecahedron();
        let v = p.vertices()[7];
        let (r, n) = cut_vertex(&p, v).unwrap();
        let (back, map) = shrink_triangle(&r, n).unwrap();
        assert_eq!(back, p);
        assert_eq!(map[n], None);
        assert_eq!(shrink_triangle(&simplex(), 0), Err(SurgeryError::NotShrinkable(0)));
    }

    #[test]
    fn simplex_sum_is_triangular_prism() {
        let s = simplex();
        let (r, tr) =
            connected_sum_vertices(&s, [1, 2, 3], &s, [1, 2, 3], &[(1, 1), (2, 2), (3, 3)]).unwrap();
        assert_eq!(r.m(), 5);
        assert!(super::super::is_isomorphic(&r, &prism(3).unwrap()).is_some());
        assert_eq!(tr.right[0], Some(4));
        assert_eq!(
            connected_sum_vertices(&s, [1, 2, 3], &s, [1, 2, 3], &[(1, 1), (2, 1), (3, 3)]).unwrap_err(),
            SurgeryError::BadMatching
        );
    }

    #[test]
    fn simplex_plus_prism3_has_six_facets() {
        let (r, _) = connected_sum_vertices(
            &simplex(),
            [0, 1, 2],
            &prism(3).unwrap(),
            [0, 2, 3],
            &[(0, 0), (1, 2), (2, 3)],
        )
        .unwrap();
        assert_eq!(r.m(), 6);
    }

    #[test]
    fn untwisted_prism_sum_is_a_prism() {
        let p = prism(5).unwrap();
        // side 2 has neighbours 0, 3, 1, 6 in some rotation; glue bases to bases
        let nb = p.neighbours(2).to_vec();
        let id: Vec<_> = nb.iter().map(|&a| (a, if a == 3 { 6 } else if a == 6 { 3 } else { a })).collect();
        let (r, _) = connected_sum_facets(&p, 2, &p, 2, &id).unwrap();
        assert_eq!(r.m(), 8);
        assert!(super::super::is_isomorphic(&r, &prism(6).unwrap()).is_some());
    }

    #[test]
    fn identification_must_be_dihedral() {
        let p = prism(5).unwrap();
        let nb = p.neighbours(2).to_vec();
        let bad = vec![(nb[0], nb[0]), (nb[1], nb[2]), (nb[2], nb[1]), (nb[3], nb[3])];
        assert_eq!(connected_sum_facets(&p, 2, &p, 2, &bad).unwrap_err(), SurgeryError::BadIdentification);
        for shift in 0..4 {
            for reflect in [false, true] {
                let id = dihedral_identification(&p, 2, &p, 2, shift, reflect);
                let (r, _) = connected_sum_facets(&p, 2, &p, 2, &id).unwrap();
                assert_eq!(r.m(), 8);
            }
        }
        assert_eq!(
            connected_sum_facets(&p, 0, &p, 2, &[]).unwrap_err(),
            SurgeryError::SizeMismatch(5, 4)
        );
    }
}
