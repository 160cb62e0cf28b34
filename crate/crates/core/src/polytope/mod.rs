//! Combinatorial simple 3-polytopes given by their vertex triples.
//!
//! A polytope with `m` facets is stored as the list of its vertices, each a
//! sorted triple of facet ids in `0..m`. Validation checks that the triples
//! form a triangulated 2-sphere (the dual simplicial complex), from which the
//! facet adjacency graph and an oriented rotation system are derived.

pub mod catalog;
mod iso;
pub mod surgery;

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use thiserror::Error;

pub use iso::{canonical_code, is_isomorphic, CanonicalCode};
pub use surgery::{
    connected_sum_facets, connected_sum_vertices, cut_edge, cut_vertex, dihedral_identification,
    shrink_triangle, SumTracking, SurgeryError,
};

/// Index of a facet, `0..m`.
pub type FacetId = usize;

/// A vertex, written as the sorted triple of facets meeting there.
pub type Vertex = [FacetId; 3];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("a simple 3-polytope needs at least 4 facets, got {0}")]
    TooFewFacets(usize),
    #[error("facet index {index} out of range for m = {m}")]
    FacetOutOfRange { index: usize, m: usize },
    #[error("vertex {0:?} repeats a facet")]
    DegenerateVertex([usize; 3]),
    #[error("vertex {0:?} listed more than once")]
    DuplicateVertex(Vertex),
    #[error("facet pair ({0}, {1}) occurs in {2} vertices, expected 0 or 2")]
    UnmatchedEdge(FacetId, FacetId, usize),
    #[error("facet {0} has no vertices")]
    IsolatedFacet(FacetId),
    #[error("edges of facet {0} do not form a single cycle")]
    SplitFacetCycle(FacetId),
    #[error("facet adjacency graph is disconnected")]
    DisconnectedAdjacency,
    #[error("Euler characteristic check failed: V - E + F = {0}")]
    EulerViolation(i64),
}

impl PolytopeError {
    /// The same error with facets numbered from 1, as in files.
    pub fn one_based(self) -> Self {
        let up = |v: [usize; 3]| v.map(|f| f + 1);
        match self {
            PolytopeError::FacetOutOfRange { index, m } => PolytopeError::FacetOutOfRange { index: index + 1, m },
            PolytopeError::DegenerateVertex(v) => PolytopeError::DegenerateVertex(up(v)),
            PolytopeError::DuplicateVertex(v) => PolytopeError::DuplicateVertex(up(v)),
            PolytopeError::UnmatchedEdge(a, b, n) => PolytopeError::UnmatchedEdge(a + 1, b + 1, n),
            PolytopeError::IsolatedFacet(f) => PolytopeError::IsolatedFacet(f + 1),
            PolytopeError::SplitFacetCycle(f) => PolytopeError::SplitFacetCycle(f + 1),
            other => other,
        }
    }
}

/// A validated simple 3-polytope.
#[derive(Clone, Debug)]
pub struct SimplePolytope {
    m: usize,
    vertices: Vec<Vertex>,
    adjacency: Vec<bool>,
    rotation: Vec<Vec<FacetId>>,
}

impl PartialEq for SimplePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.vertices == other.vertices
    }
}

impl Eq for SimplePolytope {}

pub(crate) fn sorted(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

fn edge_key(a: FacetId, b: FacetId) -> (FacetId, FacetId) {
    (a.min(b), a.max(b))
}

impl SimplePolytope {
    /// Validates a list of vertex triples over facets `0..m`.
    pub fn new(m: usize, triples: Vec<[usize; 3]>) -> Result<Self, PolytopeError> {
        if m < 4 {
            return Err(PolytopeError::TooFewFacets(m));
        }
        let mut vertices = Vec::with_capacity(triples.len());
        let mut seen = HashSet::new();
        for t in triples {
            for &i in &t {
                if i >= m {
                    return Err(PolytopeError::FacetOutOfRange { index: i, m });
                }
            }
            let s = sorted(t);
            if s[0] == s[1] || s[1] == s[2] {
                return Err(PolytopeError::DegenerateVertex(t));
            }
            if !seen.insert(s) {
                return Err(PolytopeError::DuplicateVertex(s));
            }
            vertices.push(s);
        }
        vertices.sort_unstable();

        let mut edge_count: BTreeMap<(FacetId, FacetId), usize> = BTreeMap::new();
        for v in &vertices {
            for (a, b) in [(v[0], v[1]), (v[0], v[2]), (v[1], v[2])] {
                *edge_count.entry((a, b)).or_default() += 1;
            }
        }
        if let Some((&(a, b), &c)) = edge_count.iter().find(|(_, &c)| c != 2) {
            return Err(PolytopeError::UnmatchedEdge(a, b, c));
        }

        // For each facet, the link: neighbours joined when they share a vertex
        // with it. Every neighbour has degree two there, so the link is a union
        // of cycles and must be a single one.
        let mut link: Vec<HashMap<FacetId, Vec<FacetId>>> = vec![HashMap::new(); m];
        for v in &vertices {
            for (i, j, k) in [(v[0], v[1], v[2]), (v[1], v[0], v[2]), (v[2], v[0], v[1])] {
                link[i].entry(j).or_default().push(k);
                link[i].entry(k).or_default().push(j);
            }
        }
        for (f, l) in link.iter().enumerate() {
            if l.is_empty() {
                return Err(PolytopeError::IsolatedFacet(f));
            }
            let start = *l.keys().min().unwrap();
            let (mut prev, mut cur) = (start, l[&start][0]);
            let mut len = 1;
            while cur != start {
                let nb = &l[&cur];
                let next = if nb[0] == prev { nb[1] } else { nb[0] };
                prev = cur;
                cur = next;
                len += 1;
            }
            if len != l.len() {
                return Err(PolytopeError::SplitFacetCycle(f));
            }
        }

        let mut adjacency = vec![false; m * m];
        for &(a, b) in edge_count.keys() {
            adjacency[a * m + b] = true;
            adjacency[b * m + a] = true;
        }
        let mut reached = vec![false; m];
        let mut queue = VecDeque::from([0]);
        reached[0] = true;
        while let Some(f) = queue.pop_front() {
            for g in 0..m {
                if adjacency[f * m + g] && !reached[g] {
                    reached[g] = true;
                    queue.push_back(g);
                }
            }
        }
        if reached.iter().any(|r| !r) {
            return Err(PolytopeError::DisconnectedAdjacency);
        }

        let chi = vertices.len() as i64 - edge_count.len() as i64 + m as i64;
        if chi != 2 {
            return Err(PolytopeError::EulerViolation(chi));
        }

        let rotation = orient(m, &vertices)?;
        Ok(SimplePolytope { m, vertices, adjacency, rotation })
    }

    /// Number of facets.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Sorted vertex triples.
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.vertices.len() * 3 / 2
    }

    pub fn adjacent(&self, a: FacetId, b: FacetId) -> bool {
        self.adjacency[a * self.m + b]
    }

    /// Neighbours of `f` in cyclic order around it. All cycles share one
    /// orientation of the sphere.
    pub fn neighbours(&self, f: FacetId) -> &[FacetId] {
        &self.rotation[f]
    }

    /// Number of edges (equivalently neighbours) of `f`.
    pub fn facet_size(&self, f: FacetId) -> usize {
        self.rotation[f].len()
    }

    pub fn facet_sizes(&self) -> Vec<usize> {
        (0..self.m).map(|f| self.facet_size(f)).collect()
    }

    pub fn is_quadrangle(&self, f: FacetId) -> bool {
        self.facet_size(f) == 4
    }

    /// All edges as pairs `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(FacetId, FacetId)> {
        let mut e: Vec<_> = (0..self.m)
            .flat_map(|a| self.rotation[a].iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect();
        e.sort_unstable();
        e
    }

    pub fn has_vertex(&self, t: [FacetId; 3]) -> bool {
        self.vertices.binary_search(&sorted(t)).is_ok()
    }

    /// The two vertices of the edge between adjacent facets `a` and `b`,
    /// smaller triple first.
    pub fn edge_vertices(&self, a: FacetId, b: FacetId) -> Option<[Vertex; 2]> {
        if !self.adjacent(a, b) {
            return None;
        }
        let cyc = &self.rotation[a];
        let d = cyc.len();
        let p = cyc.iter().position(|&x| x == b)?;
        let u = sorted([a, b, cyc[(p + d - 1) % d]]);
        let w = sorted([a, b, cyc[(p + 1) % d]]);
        Some(if u < w { [u, w] } else { [w, u] })
    }

    /// Facets common to three given facets: whether they meet at a vertex.
    pub fn share_vertex(&self, a: FacetId, b: FacetId, c: FacetId) -> bool {
        a != b && b != c && a != c && self.has_vertex([a, b, c])
    }

    /// Components of the adjacency graph restricted to facets with
    /// `keep[f]` true, each sorted; listed by smallest member.
    pub fn components_of(&self, keep: &[bool]) -> Vec<Vec<FacetId>> {
        let mut comp = vec![usize::MAX; self.m];
        let mut out = Vec::new();
        for s in 0..self.m {
            if !keep[s] || comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let f = members[i];
                for &g in &self.rotation[f] {
                    if keep[g] && comp[g] == usize::MAX {
                        comp[g] = id;
                        members.push(g);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Whether the cyclic facet sequence is a belt: cyclically consecutive
    /// facets are adjacent, other pairs are not, and for three facets they
    /// have no common vertex.
    pub fn is_belt_cycle(&self, cycle: &[FacetId]) -> bool {
        let k = cycle.len();
        if k < 3 || cycle.iter().any(|&f| f >= self.m) {
            return false;
        }
        let distinct: HashSet<_> = cycle.iter().collect();
        if distinct.len() != k {
            return false;
        }
        for i in 0..k {
            for j in i + 1..k {
                let consecutive = j == i + 1 || (i == 0 && j == k - 1);
                if self.adjacent(cycle[i], cycle[j]) != consecutive {
                    return false;
                }
            }
        }
        !(k == 3 && self.share_vertex(cycle[0], cycle[1], cycle[2]))
    }
}

/// Orients the dual triangulation coherently and reads off the cyclic order
/// of neighbours around each facet.
fn orient(m: usize, vertices: &[Vertex]) -> Result<Vec<Vec<FacetId>>, PolytopeError> {
    let mut by_edge: HashMap<(FacetId, FacetId), Vec<usize>> = HashMap::new();
    for (t, v) in vertices.iter().enumerate() {
        for (a, b) in [(v[0], v[1]), (v[0], v[2]), (v[1], v[2])] {
            by_edge.entry((a, b)).or_default().push(t);
        }
    }
    let mut oriented: Vec<Option<[FacetId; 3]>> = vec![None; vertices.len()];
    oriented[0] = Some(vertices[0]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(t) = queue.pop_front() {
        let o = oriented[t].unwrap();
        for i in 0..3 {
            let (x, y) = (o[i], o[(i + 1) % 3]);
            for &u in &by_edge[&edge_key(x, y)] {
                if u == t {
                    continue;
                }
                let v = vertices[u];
                let z = v.iter().copied().find(|&f| f != x && f != y).unwrap();
                // the neighbour must traverse the shared edge as y -> x
                let want = [y, x, z];
                match oriented[u] {
                    None => {
                        oriented[u] = Some(want);
                        queue.push_back(u);
                    }
                    Some(have) => {
                        if !same_cyclic(have, want) {
                            return Err(PolytopeError::EulerViolation(0));
                        }
                    }
                }
            }
        }
    }
    let mut next: Vec<HashMap<FacetId, FacetId>> = vec![HashMap::new(); m];
    for o in oriented.into_iter().map(|o| o.unwrap()) {
        for i in 0..3 {
            next[o[i]].insert(o[(i + 1) % 3], o[(i + 2) % 3]);
        }
    }
    Ok(next
        .into_iter()
        .map(|n| {
            let start = *n.keys().min().unwrap();
            let mut cyc = vec![start];
            let mut cur = n[&start];
            while cur != start {
                cyc.push(cur);
                cur = n[&cur];
            }
            cyc
        })
        .collect())
}

fn same_cyclic(a: [FacetId; 3], b: [FacetId; 3]) -> bool {
    (0..3).any(|s| (0..3).all(|i| a[(i + s) % 3] == b[i]))
}

/// Where a facet of a derived polytope comes from in its parent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// An untouched facet of the parent.
    Original { parent: FacetId },
    /// A copy of a parent facet that lay on the cut belt with index `belt`.
    BeltFacet { parent: FacetId, belt: usize },
    /// The new facet created by cut number `cut`.
    NewFacet { cut: usize },
}

impl Provenance {
    /// The parent facet, unless this is a new facet.
    pub fn parent(&self) -> Option<FacetId> {
        match *self {
            Provenance::Original { parent } | Provenance::BeltFacet { parent, .. } => Some(parent),
            Provenance::NewFacet { .. } => None,
        }
    }
}

/// Provenance of every facet of a derived polytope, indexed by its facets.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(transparent)]
pub struct FacetTracking(pub Vec<Provenance>);

impl FacetTracking {
    pub fn identity(m: usize) -> Self {
        FacetTracking((0..m).map(|parent| Provenance::Original { parent }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, f: FacetId) -> Provenance {
        self.0[f]
    }

    pub fn parent(&self, f: FacetId) -> Option<FacetId> {
        self.0[f].parent()
    }

    /// Local facet whose parent is `p`, if any.
    pub fn local_of(&self, p: FacetId) -> Option<FacetId> {
        self.0.iter().position(|pr| pr.parent() == Some(p))
    }

    /// Local facets created as new facets.
    pub fn new_facets(&self) -> Vec<(FacetId, usize)> {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(f, p)| match *p {
                Provenance::NewFacet { cut } => Some((f, cut)),
                _ => None,
            })
            .collect()
    }

    /// Expresses `self` (child over middle) in terms of `outer` (middle over
    /// root). Belt ids of `self` are kept when a facet is a belt copy at both
    /// stages.
    pub fn compose(&self, outer: &FacetTracking) -> FacetTracking {
        FacetTracking(
            self.0
                .iter()
                .map(|p| match *p {
                    Provenance::Original { parent } => outer.0[parent],
                    Provenance::BeltFacet { parent, belt } => match outer.0[parent] {
                        Provenance::Original { parent } | Provenance::BeltFacet { parent, .. } => {
                            Provenance::BeltFacet { parent, belt }
                        }
                        n @ Provenance::NewFacet { .. } => n,
                    },
                    n @ Provenance::NewFacet { .. } => n,
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simplex_triples() -> Vec<[usize; 3]> {
        vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
    }

    #[test]
    fn simplex_is_valid() {
        let p = SimplePolytope::new(4, simplex_triples()).unwrap();
        assert_eq!(p.num_vertices(), 4);
        assert_eq!(p.num_edges(), 6);
        assert!(p.adjacent(0, 3));
        assert_eq!(p.facet_size(2), 3);
    }

    #[test]
    fn missing_vertex_is_unmatched_edge() {
        let mut t = simplex_triples();
        t.pop();
        assert!(matches!(SimplePolytope::new(4, t), Err(PolytopeError::UnmatchedEdge(..))));
    }

    #[test]
    fn duplicate_and_degenerate() {
        let mut t = simplex_triples();
        t.push([2, 1, 0]);
        assert!(matches!(SimplePolytope::new(4, t), Err(PolytopeError::DuplicateVertex(_))));
        let t = vec![[0, 0, 1], [0, 1, 2], [0, 2, 3], [1, 2, 3]];
        assert!(matches!(SimplePolytope::new(4, t), Err(PolytopeError::DegenerateVertex(_))));
    }

    #[test]
    fn two_disjoint_simplices_are_disconnected() {
        let mut t = simplex_triples();
        t.extend(simplex_triples().iter().map(|v| [v[0] + 4, v[1] + 4, v[2] + 4]));
        assert_eq!(SimplePolytope::new(8, t), Err(PolytopeError::DisconnectedAdjacency));
    }

    #[test]
    fn torus_triangulation_fails_euler() {
        // the 7-vertex torus, as a "dual" triangulation on 7 facets
        let mut t = Vec::new();
        for i in 0..7 {
            t.push([i, (i + 1) % 7, (i + 3) % 7]);
            t.push([i, (i + 2) % 7, (i + 3) % 7]);
        }
        assert_eq!(SimplePolytope::new(7, t), Err(PolytopeError::EulerViolation(0)));
    }

    #[test]
    fn pinched_facet_has_split_cycle() {
        // two octahedra-like discs glued at a single facet: facet 0 sees two
        // separate cycles. Built from two simplices sharing facet 0's vertex
        // set pattern.
        let t = vec![
            [0, 1, 2],
            [0, 2, 3],
            [0, 1, 3],
            [1, 2, 3],
            [0, 4, 5],
            [0, 5, 6],
            [0, 4, 6],
            [4, 5, 6],
        ];
        assert_eq!(SimplePolytope::new(7, t), Err(PolytopeError::SplitFacetCycle(0)));
    }

    #[test]
    fn rotation_is_coherent() {
        let p = catalog::dodecahedron();
        // around every vertex (a,b,c) the orientations of a, b and c agree:
        // if b follows... each oriented triangle appears once in each
        // facet's rotation as consecutive pairs.
        for v in p.vertices() {
            let [a, b, c] = *v;
            let succ = |f: FacetId, g: FacetId| {
                let cyc = p.neighbours(f);
                cyc[(cyc.iter().position(|&x| x == g).unwrap() + 1) % cyc.len()]
            };
            // orientation (a, x, y) with y following x around a
            let (x, y) = if succ(a, b) == c { (b, c) } else { (c, b) };
            assert_eq!(succ(a, x), y);
            assert_eq!(succ(x, y), a);
            assert_eq!(succ(y, a), x);
        }
    }
}
