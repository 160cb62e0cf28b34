//! Belts: cyclic sequences of facets that wrap around a polytope.
//!
//! A `k`-belt is a cyclic sequence of `k` facets in which two facets are
//! adjacent exactly when they are consecutive, and (for `k = 3`) the three
//! facets have no common vertex. Its complement falls into two components,
//! the two sides. Cutting along a belt splits the polytope into two pieces,
//! each closed off by a new `k`-gon.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::polytope::{FacetId, FacetTracking, Provenance, SimplePolytope, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BeltError {
    #[error("belt must have at least 3 facets, got {0}")]
    TooShort(usize),
    #[error("facet sequence {0:?} is not a belt")]
    NotABelt(Vec<FacetId>),
    #[error("complement of belt {0:?} has {1} components, expected 2")]
    NotTwoComponents(Vec<FacetId>, usize),
    #[error("facets of one belt are contained in the other")]
    DegenerateOverlap,
    #[error("belts {0} and {1} of the family are not compatible")]
    NotNested(usize, usize),
    #[error("belts crossing edge ({0}, {1}) are not linearly ordered")]
    InconsistentEdgeOrder(FacetId, FacetId),
    #[error("curves cross inside facet {0}")]
    CrossingCurves(FacetId),
    #[error("belt {0} does not lie in a single piece")]
    Unplaced(usize),
    #[error("search space too large ({0} sequences)")]
    TooLarge(u128),
    #[error("invalid polytope: {0}")]
    Polytope(#[from] crate::polytope::PolytopeError),
}

/// A belt in canonical form: the smallest facet first, then the direction
/// whose second entry is smaller.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Belt(Vec<FacetId>);

/// Lexicographically least rotation of a cycle over both orientations.
pub fn canonical_rotation(cycle: &[FacetId]) -> Vec<FacetId> {
    let k = cycle.len();
    if k == 0 {
        return Vec::new();
    }
    let s = (0..k).min_by_key(|&i| cycle[i]).unwrap();
    let fwd: Vec<_> = (0..k).map(|t| cycle[(s + t) % k]).collect();
    let bwd: Vec<_> = (0..k).map(|t| cycle[(s + k - t) % k]).collect();
    fwd.min(bwd)
}

impl Belt {
    /// Validates and canonicalises a cyclic facet sequence.
    pub fn new(p: &SimplePolytope, cycle: &[FacetId]) -> Result<Self, BeltError> {
        if cycle.len() < 3 {
            return Err(BeltError::TooShort(cycle.len()));
        }
        if !p.is_belt_cycle(cycle) {
            return Err(BeltError::NotABelt(cycle.to_vec()));
        }
        Ok(Belt(canonical_rotation(cycle)))
    }

    pub fn facets(&self) -> &[FacetId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, f: FacetId) -> bool {
        self.0.contains(&f)
    }

    /// Cyclically consecutive pairs `(b_t, b_{t+1})`.
    pub fn consecutive_pairs(&self) -> impl Iterator<Item = (FacetId, FacetId)> + '_ {
        let k = self.0.len();
        (0..k).map(move |t| (self.0[t], self.0[(t + 1) % k]))
    }

    /// Predecessor and successor of the facet at position `t`.
    fn around(&self, t: usize) -> (FacetId, FacetId) {
        let k = self.0.len();
        (self.0[(t + k - 1) % k], self.0[(t + 1) % k])
    }

    fn membership(&self, m: usize) -> Vec<bool> {
        let mut on = vec![false; m];
        for &f in &self.0 {
            on[f] = true;
        }
        on
    }
}

/// All `k`-belts of `p`, canonical and sorted.
pub fn enumerate_belts(p: &SimplePolytope, k: usize) -> Vec<Belt> {
    fn extend(p: &SimplePolytope, k: usize, path: &mut Vec<FacetId>, out: &mut Vec<Belt>) {
        let i = path.len();
        let s = path[0];
        let last = path[i - 1];
        for &f in p.neighbours(last) {
            if f <= s || path.contains(&f) {
                continue;
            }
            if i == k - 1 {
                if !p.adjacent(f, s) || f < path[1] {
                    continue;
                }
                if path[1..k - 2].iter().any(|&g| p.adjacent(f, g)) {
                    continue;
                }
                if k == 3 && p.share_vertex(path[0], path[1], f) {
                    continue;
                }
                path.push(f);
                out.push(Belt(path.clone()));
                path.pop();
            } else {
                if path[..i - 1].iter().any(|&g| p.adjacent(f, g)) {
                    continue;
                }
                path.push(f);
                extend(p, k, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    if k < 3 || k > p.m() {
        return out;
    }
    for s in 0..p.m() {
        extend(p, k, &mut vec![s], &mut out);
    }
    out.sort();
    out
}

/// Facets of size `k` whose neighbours are exactly the facets of the belt.
pub fn surrounded_facets(p: &SimplePolytope, belt: &Belt) -> Vec<FacetId> {
    let mut set = belt.0.clone();
    set.sort_unstable();
    (0..p.m())
        .filter(|&f| {
            if p.facet_size(f) != belt.len() {
                return false;
            }
            let mut nb = p.neighbours(f).to_vec();
            nb.sort_unstable();
            nb == set
        })
        .collect()
}

/// A belt is trivial when it surrounds a facet.
pub fn is_trivial(p: &SimplePolytope, belt: &Belt) -> bool {
    !surrounded_facets(p, belt).is_empty()
}

/// The two sides of a belt.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sides {
    /// Facets of each side, sorted; side 0 holds the smallest off-belt facet.
    pub facets: [Vec<FacetId>; 2],
    #[serde(skip)]
    side_of: Vec<Option<usize>>,
}

impl Sides {
    /// Side of a facet, `None` for belt facets.
    pub fn side_of(&self, f: FacetId) -> Option<usize> {
        self.side_of[f]
    }

    /// Side of a vertex. Every vertex has an off-belt facet, and all of its
    /// off-belt facets lie on one side.
    pub fn vertex_side(&self, v: Vertex) -> usize {
        v.iter().find_map(|&f| self.side_of[f]).expect("vertex with all facets on the belt")
    }
}

pub fn complement(p: &SimplePolytope, belt: &Belt) -> Result<Sides, BeltError> {
    let on = belt.membership(p.m());
    let keep: Vec<bool> = on.iter().map(|b| !b).collect();
    let comps = p.components_of(&keep);
    if comps.len() != 2 {
        return Err(BeltError::NotTwoComponents(belt.0.clone(), comps.len()));
    }
    let mut side_of = vec![None; p.m()];
    for (s, c) in comps.iter().enumerate() {
        for &f in c {
            side_of[f] = Some(s);
        }
    }
    let [a, b]: [Vec<FacetId>; 2] = comps.try_into().unwrap();
    Ok(Sides { facets: [a, b], side_of })
}

/// Two belts are compatible when the facets of the second that are off the
/// first all lie on one side of the first.
pub fn compatible(p: &SimplePolytope, b1: &Belt, b2: &Belt) -> Result<bool, BeltError> {
    if b2.0.iter().all(|f| b1.contains(*f)) || b1.0.iter().all(|f| b2.contains(*f)) {
        return Err(BeltError::DegenerateOverlap);
    }
    let sides = complement(p, b1)?;
    let mut hit = [false; 2];
    for &f in &b2.0 {
        if let Some(s) = sides.side_of(f) {
            hit[s] = true;
        }
    }
    Ok(!(hit[0] && hit[1]))
}

/// The crossing points of a family of curves with one edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeCrossings {
    /// Endpoint of the edge from which the points are listed.
    pub from: Vertex,
    /// Indices into the family, nearest to `from` first.
    pub belts: Vec<usize>,
}

/// Disjoint curves realising a nested family of belts, recorded by the
/// order in which they cross each edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveFamily {
    pub edges: BTreeMap<(FacetId, FacetId), EdgeCrossings>,
}

fn edge_key(a: FacetId, b: FacetId) -> (FacetId, FacetId) {
    (a.min(b), a.max(b))
}

/// A belt crossing an edge, with the facets on the designated side.
type Crossing<'a> = (usize, &'a [FacetId]);

/// Checks that the family is pairwise compatible and builds the crossing
/// orders. On an edge, belts are ordered by inclusion of the side that
/// contains the chosen endpoint. The orders are then checked for crossings
/// inside every facet.
pub fn curves_for_family(p: &SimplePolytope, family: &[Belt]) -> Result<CurveFamily, BeltError> {
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            if !compatible(p, &family[i], &family[j])? {
                return Err(BeltError::NotNested(i, j));
            }
        }
    }
    let sides: Vec<Sides> = family.iter().map(|b| complement(p, b)).collect::<Result<_, _>>()?;
    let mut per_edge: BTreeMap<(FacetId, FacetId), (Vertex, Vec<Crossing>)> = BTreeMap::new();
    for (id, b) in family.iter().enumerate() {
        for (a, c) in b.consecutive_pairs() {
            let from = p.edge_vertices(a, c).expect("belt neighbours share an edge")[0];
            let side = sides[id].vertex_side(from);
            per_edge
                .entry(edge_key(a, c))
                .or_insert_with(|| (from, Vec::new()))
                .1
                .push((id, sides[id].facets[side].as_slice()));
        }
    }
    let mut edges = BTreeMap::new();
    for ((a, c), (from, mut list)) in per_edge {
        list.sort_by_key(|(_, s)| s.len());
        for w in list.windows(2) {
            if !w[0].1.iter().all(|f| w[1].1.binary_search(f).is_ok()) {
                return Err(BeltError::InconsistentEdgeOrder(a, c));
            }
        }
        edges.insert((a, c), EdgeCrossings { from, belts: list.into_iter().map(|x| x.0).collect() });
    }
    let curves = CurveFamily { edges };
    check_chords(p, family, &curves)?;
    Ok(curves)
}

/// Every belt through a facet contributes a chord joining points on two of
/// its edges; the chords of one facet must not cross.
pub(crate) fn check_chords(p: &SimplePolytope, family: &[Belt], curves: &CurveFamily) -> Result<(), BeltError> {
    let mut chords: BTreeMap<FacetId, Vec<(usize, usize)>> = BTreeMap::new();
    let mut position: BTreeMap<(FacetId, FacetId, usize), usize> = BTreeMap::new();
    for f in 0..p.m() {
        let cyc = p.neighbours(f);
        let d = cyc.len();
        let mut pos = 0;
        for t in 0..d {
            let g = cyc[t];
            let Some(cross) = curves.edges.get(&edge_key(f, g)) else { continue };
            let start = crate::polytope::sorted([f, cyc[(t + d - 1) % d], g]);
            let n = cross.belts.len();
            for (i, &b) in cross.belts.iter().enumerate() {
                let along = if cross.from == start { i } else { n - 1 - i };
                position.insert((f, g, b), pos + along);
            }
            pos += n;
        }
    }
    for (id, b) in family.iter().enumerate() {
        for t in 0..b.len() {
            let f = b.0[t];
            let (x, y) = b.around(t);
            let (u, v) = (position[&(f, x, id)], position[&(f, y, id)]);
            chords.entry(f).or_default().push((u.min(v), u.max(v)));
        }
    }
    for (f, list) in chords {
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                let ((a, b), (c, d)) = (list[i], list[j]);
                if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                    return Err(BeltError::CrossingCurves(f));
                }
            }
        }
    }
    Ok(())
}

/// A piece of a cut, with the provenance of its facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub polytope: SimplePolytope,
    pub tracking: FacetTracking,
}

/// Cuts `p` along `belt`. Piece `s` consists of side `s`, copies of the
/// belt facets and a new `k`-gon, which is the last facet of the piece.
/// `id` labels the belt in the provenance records.
pub fn cut_along_belt(p: &SimplePolytope, belt: &Belt, id: usize) -> Result<[Piece; 2], BeltError> {
    let sides = complement(p, belt)?;
    let make = |s: usize| -> Result<Piece, BeltError> {
        let mut keep: Vec<FacetId> = sides.facets[s].iter().chain(belt.0.iter()).copied().collect();
        keep.sort_unstable();
        let mut local = vec![usize::MAX; p.m()];
        for (i, &f) in keep.iter().enumerate() {
            local[f] = i;
        }
        let new = keep.len();
        let mut t: Vec<[usize; 3]> = p
            .vertices()
            .iter()
            .filter(|&&v| sides.vertex_side(v) == s)
            .map(|v| v.map(|f| local[f]))
            .collect();
        t.extend(belt.consecutive_pairs().map(|(a, b)| [local[a], local[b], new]));
        let polytope = SimplePolytope::new(new + 1, t)?;
        let mut prov: Vec<Provenance> = keep
            .iter()
            .map(|&f| {
                if sides.side_of(f).is_some() {
                    Provenance::Original { parent: f }
                } else {
                    Provenance::BeltFacet { parent: f, belt: id }
                }
            })
            .collect();
        prov.push(Provenance::NewFacet { cut: id });
        Ok(Piece { polytope, tracking: FacetTracking(prov) })
    };
    Ok([make(0)?, make(1)?])
}

/// Cuts `p` along every belt of a nested family. The result has one more
/// piece than the family has belts; trackings refer to facets of `p` and
/// label new facets by their belt's index in `family`.
pub fn cut_along_family(p: &SimplePolytope, family: &[Belt]) -> Result<Vec<Piece>, BeltError> {
    curves_for_family(p, family)?;
    let start = Piece { polytope: p.clone(), tracking: FacetTracking::identity(p.m()) };
    let pending: Vec<usize> = (0..family.len()).collect();
    let mut out = Vec::with_capacity(family.len() + 1);
    cut_rec(start, family, pending, &mut out)?;
    Ok(out)
}

fn localise(piece: &Piece, belt: &Belt) -> Option<Vec<FacetId>> {
    belt.0.iter().map(|&f| piece.tracking.local_of(f)).collect()
}

fn cut_rec(piece: Piece, family: &[Belt], pending: Vec<usize>, out: &mut Vec<Piece>) -> Result<(), BeltError> {
    let Some((&first, rest)) = pending.split_first() else {
        out.push(piece);
        return Ok(());
    };
    let local = localise(&piece, &family[first]).ok_or(BeltError::Unplaced(first))?;
    let belt = Belt::new(&piece.polytope, &local)?;
    let halves = cut_along_belt(&piece.polytope, &belt, first)?;
    let halves: Vec<Piece> = halves
        .into_iter()
        .map(|h| Piece { tracking: h.tracking.compose(&piece.tracking), polytope: h.polytope })
        .collect();
    let mut split: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for &b in rest {
        let homes: Vec<usize> = (0..2).filter(|&s| localise(&halves[s], &family[b]).is_some()).collect();
        match homes.as_slice() {
            [s] => split[*s].push(b),
            _ => return Err(BeltError::Unplaced(b)),
        }
    }
    let [s0, s1] = split;
    let mut it = halves.into_iter();
    cut_rec(it.next().unwrap(), family, s0, out)?;
    cut_rec(it.next().unwrap(), family, s1, out)
}

/// Exhaustive search over all sequences of `k` distinct facets, checking the
/// belt definition directly. Refuses when more than `10^8` sequences would
/// be visited.
pub fn brute_force_belts(p: &SimplePolytope, k: usize) -> Result<Vec<Belt>, BeltError> {
    let m = p.m() as u128;
    let total: u128 = (0..k as u128).map(|i| m.saturating_sub(i)).product();
    if total > 100_000_000 {
        return Err(BeltError::TooLarge(total));
    }
    let mut found = std::collections::BTreeSet::new();
    let mut seq = Vec::with_capacity(k);
    fn go(p: &SimplePolytope, k: usize, seq: &mut Vec<FacetId>, found: &mut std::collections::BTreeSet<Vec<FacetId>>) {
        if seq.len() == k {
            let ok = (0..k).all(|i| {
                (0..k).all(|j| {
                    if i == j {
                        return true;
                    }
                    let d = (i + k - j) % k;
                    p.adjacent(seq[i], seq[j]) == (d == 1 || d == k - 1)
                })
            });
            let triple = k == 3 && p.has_vertex([seq[0], seq[1], seq[2]]);
            if ok && !triple {
                found.insert(canonical_rotation(seq));
            }
            return;
        }
        for f in 0..p.m() {
            if !seq.contains(&f) {
                seq.push(f);
                go(p, k, seq, found);
                seq.pop();
            }
        }
    }
    if k >= 3 {
        go(p, k, &mut seq, &mut found);
    }
    Ok(found.into_iter().map(Belt).collect())
}
