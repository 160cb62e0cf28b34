//! Independent checks through explicit cell complexes.
//!
//! The manifold of a colouring is assembled cell by cell: a face `G` of the
//! polytope in copy `a` is identified with its copies `a + x` for `x` in the
//! span of the columns of the facets containing `G`. Cells are stored as
//! (face, canonical coset representative).

use std::collections::{HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::coloring::VectorColoring;
use crate::gf2::{self, Subspace};
use crate::polytope::{FacetId, SimplePolytope};

/// Largest rank for which 3-dimensional complexes are built.
pub const MAX_COMPLEX_RANK: usize = 16;
/// Largest span dimension for surface complexes.
pub const MAX_SURFACE_RANK: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("rank {rank} exceeds the oracle limit {cap}")]
    TooLarge { rank: usize, cap: usize },
    #[error("polygon needs at least 3 edges")]
    TooFewEdges,
    #[error("wrong number of columns: expected {expected}, got {got}")]
    WrongLength { expected: usize, got: usize },
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a] = b;
        }
    }
    fn count_roots(&mut self, of: impl Iterator<Item = usize>) -> usize {
        let roots: HashSet<usize> = of.map(|x| self.find(x)).collect();
        roots.len()
    }
}

/// Is the graph on `0..2^r` with edges `a -- a + g` (for `g` in `gens`)
/// bipartite, and how many components does it have?
fn flip_graph(r: usize, gens: &[u64]) -> (bool, usize) {
    let n = 1usize << r;
    let mut colour = vec![u8::MAX; n];
    let mut bipartite = true;
    let mut comps = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if colour[s] != u8::MAX {
            continue;
        }
        comps += 1;
        colour[s] = 0;
        stack.push(s);
        while let Some(a) = stack.pop() {
            for &g in gens {
                let b = a ^ g as usize;
                if colour[b] == u8::MAX {
                    colour[b] = colour[a] ^ 1;
                    stack.push(b);
                } else if colour[b] == colour[a] {
                    bipartite = false;
                }
            }
        }
    }
    (bipartite, comps)
}

/// The manifold of a colouring as a cell complex.
#[derive(Clone, Debug)]
pub struct GluedComplex {
    rank: usize,
    columns: Vec<u64>,
    facets_of_face: Vec<Vec<FacetId>>,
    spans: Vec<Subspace>,
    // face indices by dimension: vertices, edges, facets, the body
    faces_by_dim: [Vec<usize>; 4],
    cells: [usize; 4],
    closed: bool,
    facet_neighbours: Vec<Vec<FacetId>>,
    edge_of: HashMap<(FacetId, FacetId), usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexSummary {
    pub rank: usize,
    pub cells: [usize; 4],
    pub euler_characteristic: i64,
    pub connected: bool,
    pub closed_manifold: bool,
    pub orientable: bool,
}

/// Builds the complex from the colouring's columns, written in a basis of
/// their span so that there are `2^rank` copies of the polytope.
pub fn build_complex(p: &SimplePolytope, c: &VectorColoring) -> Result<GluedComplex, OracleError> {
    build_complex_raw(p, c.normal_form().columns())
}

/// Like [`build_complex`] for arbitrary columns; the vertex condition is
/// not assumed and shows up as a failed manifold check.
pub fn build_complex_raw(p: &SimplePolytope, columns: &[u64]) -> Result<GluedComplex, OracleError> {
    if columns.len() != p.m() {
        return Err(OracleError::WrongLength { expected: p.m(), got: columns.len() });
    }
    let rank = gf2::rank(columns.iter().copied());
    if rank > MAX_COMPLEX_RANK {
        return Err(OracleError::TooLarge { rank, cap: MAX_COMPLEX_RANK });
    }
    let basis = gf2::CoordinateBasis::new(
        &gf2::greedy_basis_positions(columns).into_iter().map(|i| columns[i]).collect::<Vec<_>>(),
    )
    .unwrap();
    let columns: Vec<u64> = columns.iter().map(|&v| basis.coordinates(v).unwrap()).collect();

    let mut facets_of_face: Vec<Vec<FacetId>> = Vec::new();
    let mut faces_by_dim: [Vec<usize>; 4] = Default::default();
    let mut edge_of = HashMap::new();
    for v in p.vertices() {
        faces_by_dim[0].push(facets_of_face.len());
        facets_of_face.push(v.to_vec());
    }
    for (a, b) in p.edges() {
        edge_of.insert((a, b), facets_of_face.len());
        faces_by_dim[1].push(facets_of_face.len());
        facets_of_face.push(vec![a, b]);
    }
    for f in 0..p.m() {
        faces_by_dim[2].push(facets_of_face.len());
        facets_of_face.push(vec![f]);
    }
    faces_by_dim[3].push(facets_of_face.len());
    facets_of_face.push(Vec::new());
    let spans: Vec<Subspace> =
        facets_of_face.iter().map(|fs| Subspace::spanned_by(fs.iter().map(|&f| columns[f]))).collect();

    // count the copies of the body meeting each cell
    let n = 1u64 << rank;
    let mut cells = [0usize; 4];
    let mut closed = true;
    for (d, faces) in faces_by_dim.iter().enumerate() {
        // a cell of a face of codimension c must meet 2^c copies
        let need = 1usize << (3 - d);
        for &face in faces {
            let mut hits: HashMap<u64, usize> = HashMap::new();
            for a in 0..n {
                *hits.entry(spans[face].reduce(a)).or_default() += 1;
            }
            cells[d] += hits.len();
            if hits.values().any(|&h| h != need) {
                closed = false;
            }
        }
    }
    let facet_neighbours = (0..p.m()).map(|f| p.neighbours(f).to_vec()).collect();
    Ok(GluedComplex { rank, columns, facets_of_face, spans, faces_by_dim, cells, closed, facet_neighbours, edge_of })
}

impl GluedComplex {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Cells in dimensions 0..=3.
    pub fn cells(&self) -> [usize; 4] {
        self.cells
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells[0] as i64 - self.cells[1] as i64 + self.cells[2] as i64 - self.cells[3] as i64
    }

    /// Every 2-cell bounds two 3-cells, every edge cell four and every vertex
    /// cell eight.
    pub fn is_closed_manifold(&self) -> bool {
        self.closed
    }

    pub fn is_connected(&self) -> bool {
        flip_graph(self.rank, &self.columns).1 == 1
    }

    /// Orientations of the copies must alternate across every 2-cell.
    pub fn orientable_by_propagation(&self) -> bool {
        flip_graph(self.rank, &self.columns).0
    }

    pub fn summary(&self) -> ComplexSummary {
        ComplexSummary {
            rank: self.rank,
            cells: self.cells,
            euler_characteristic: self.euler_characteristic(),
            connected: self.is_connected(),
            closed_manifold: self.closed,
            orientable: self.orientable_by_propagation(),
        }
    }

    /// Components of the union of the polygon pieces spanned by a belt in
    /// every copy. The piece in copy `a` meets the 2-cells of the belt
    /// facets in that copy, and pieces sharing a 2-cell are joined.
    pub fn count_belt_components(&self, belt: &[FacetId]) -> usize {
        let n = 1usize << self.rank;
        let two_cells: Vec<usize> = belt.iter().map(|&f| self.faces_by_dim[2][f]).collect();
        let mut ids: HashMap<(usize, u64), usize> = HashMap::new();
        let mut edges = Vec::new();
        for a in 0..n as u64 {
            for &face in &two_cells {
                let key = (face, self.spans[face].reduce(a));
                let next = n + ids.len();
                let id = *ids.entry(key).or_insert(next);
                edges.push((a as usize, id));
            }
        }
        let mut uf = UnionFind::new(n + ids.len());
        for (x, y) in edges {
            uf.union(x, y);
        }
        uf.count_roots(0..n)
    }

    /// Components of the union of the copies of facet `f`: its 2-cells are
    /// joined through the edge cells of its edges.
    pub fn count_facet_components(&self, f: FacetId) -> usize {
        let face = self.faces_by_dim[2][f];
        let mut ids: HashMap<(usize, u64), usize> = HashMap::new();
        let mut pairs = Vec::new();
        for a in 0..1u64 << self.rank {
            let two = (face, self.spans[face].reduce(a));
            for &g in &self.facet_neighbours[f] {
                let e = self.edge_of[&(f.min(g), f.max(g))];
                let one = (e, self.spans[e].reduce(a));
                pairs.push((two, one));
            }
        }
        let mut intern = |k: (usize, u64)| {
            let n = ids.len();
            *ids.entry(k).or_insert(n)
        };
        let idx: Vec<(usize, usize)> = pairs.into_iter().map(|(a, b)| (intern(a), intern(b))).collect();
        let twos: Vec<usize> = ids.iter().filter(|((fc, _), _)| *fc == face).map(|(_, &i)| i).collect();
        let mut uf = UnionFind::new(ids.len());
        for (a, b) in idx {
            uf.union(a, b);
        }
        uf.count_roots(twos.into_iter())
    }

    /// Facets containing face number `i` (vertices, then edges, facets, body).
    pub fn face_facets(&self, i: usize) -> &[FacetId] {
        &self.facets_of_face[i]
    }
}

/// The surface glued from copies of a polygon whose edges carry the given
/// vectors in cyclic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceComplex {
    pub span_dim: usize,
    /// Vertices, edges, polygons.
    pub cells: [usize; 3],
    pub euler_characteristic: i64,
    pub orientable: bool,
    pub components: usize,
    pub closed: bool,
    /// Genus when orientable, cross-caps otherwise (connected case).
    pub genus: i64,
}

pub fn surface_complex(columns: &[u64]) -> Result<SurfaceComplex, OracleError> {
    let k = columns.len();
    if k < 3 {
        return Err(OracleError::TooFewEdges);
    }
    let rb = gf2::rank(columns.iter().copied());
    if rb > MAX_SURFACE_RANK {
        return Err(OracleError::TooLarge { rank: rb, cap: MAX_SURFACE_RANK });
    }
    let basis = gf2::CoordinateBasis::new(
        &gf2::greedy_basis_positions(columns).into_iter().map(|i| columns[i]).collect::<Vec<_>>(),
    )
    .unwrap();
    let cols: Vec<u64> = columns.iter().map(|&v| basis.coordinates(v).unwrap()).collect();
    let n = 1u64 << rb;
    let mut closed = true;
    let mut count = |span: Subspace, need: usize| -> usize {
        let mut hits: HashMap<u64, usize> = HashMap::new();
        for a in 0..n {
            *hits.entry(span.reduce(a)).or_default() += 1;
        }
        if hits.values().any(|&h| h != need) {
            closed = false;
        }
        hits.len()
    };
    let mut cells = [0usize, 0, n as usize];
    for t in 0..k {
        cells[1] += count(Subspace::spanned_by([cols[t]]), 2);
        cells[0] += count(Subspace::spanned_by([cols[t], cols[(t + 1) % k]]), 4);
    }
    let chi = cells[0] as i64 - cells[1] as i64 + cells[2] as i64;
    let (orientable, components) = flip_graph(rb, &cols);
    let genus = if orientable { (2 - chi) / 2 } else { 2 - chi };
    Ok(SurfaceComplex { span_dim: rb, cells, euler_characteristic: chi, orientable, components, closed, genus })
}

/// One line of a self-check run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub failures: usize,
}

fn tally(name: &str, results: impl Iterator<Item = bool>) -> CheckResult {
    let (mut cases, mut failures) = (0, 0);
    for ok in results {
        cases += 1;
        if !ok {
            failures += 1;
        }
    }
    CheckResult { name: name.into(), passed: failures == 0, cases, failures }
}

/// Belt enumeration against exhaustive search on small catalog polytopes.
pub fn check_belts() -> CheckResult {
    use crate::polytope::catalog::*;
    let polys = [simplex(), prism(3).unwrap(), cube(), prism(5).unwrap(), prism(6).unwrap(), associahedron3()];
    tally(
        "belts",
        polys.iter().flat_map(|p| {
            (3..=5).map(move |k| crate::belts::brute_force_belts(p, k).is_ok_and(|b| b == crate::belts::enumerate_belts(p, k)))
        }),
    )
}

/// Orientability by basis parity, by a linear functional, and by sign
/// propagation in the complex, on every class of colourings of small
/// polytopes.
pub fn check_orientability() -> CheckResult {
    use crate::polytope::catalog::*;
    let mut results = Vec::new();
    for p in [simplex(), prism(3).unwrap(), cube()] {
        for rank in 3..=p.m() {
            for c in crate::coloring::enumerate_colorings(&p, rank, None).unwrap().classes {
                let a = c.is_orientable();
                let b = c.orientation_functional().is_some();
                let cx = build_complex(&p, &c).unwrap();
                results.push(a == b && b == cx.orientable_by_propagation() && cx.is_closed_manifold() && cx.euler_characteristic() == 0);
            }
        }
    }
    tally("orientability", results.into_iter())
}

/// Surfaces over polygons with identity colourings against closed forms.
pub fn check_surfaces() -> CheckResult {
    tally(
        "surfaces",
        (4..=8).map(|k| {
            let cols: Vec<u64> = (0..k).map(gf2::unit).collect();
            let s = surface_complex(&cols).unwrap();
            let chi = (k << (k - 2)) as i64 - (k << (k - 1)) as i64 + (1i64 << k);
            s.euler_characteristic == chi && s.orientable && s.genus == ((k as i64 - 4) << (k - 3)) + 1
        }),
    )
}

/// Component counts of belt and facet subcomplexes against span dimensions.
pub fn check_components() -> CheckResult {
    use crate::polytope::catalog::*;
    let mut results = Vec::new();
    for p in [cube(), prism(5).unwrap(), associahedron3()] {
        let c = VectorColoring::identity(&p);
        let cx = build_complex(&p, &c).unwrap();
        let r = c.rank();
        for b in crate::belts::enumerate_belts(&p, 4) {
            results.push(cx.count_belt_components(b.facets()) == 1 << (r - c.subspace(b.facets()).dim()));
        }
        for f in 0..p.m() {
            let mut fs = p.neighbours(f).to_vec();
            fs.push(f);
            results.push(cx.count_facet_components(f) == 1 << (r - c.subspace(&fs).dim()));
        }
    }
    tally("components", results.into_iter())
}

/// All self-checks.
pub fn check_all() -> Vec<CheckResult> {
    vec![check_belts(), check_orientability(), check_surfaces(), check_components()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::catalog::*;

    #[test]
    fn simplex_identity_complex() {
        let s = simplex();
        let cx = build_complex(&s, &VectorColoring::identity(&s)).unwrap();
        assert_eq!(cx.cells()[3], 16);
        assert_eq!(cx.euler_characteristic(), 0);
        assert!(cx.is_connected() && cx.is_closed_manifold() && cx.orientable_by_propagation());
    }

    #[test]
    fn detects_star_violation() {
        let s = simplex();
        let cx = build_complex_raw(&s, &[1, 2, 3, 4]).unwrap();
        assert!(!cx.is_closed_manifold());
    }

    #[test]
    fn non_orientable_cube() {
        let c = cube();
        let col = VectorColoring::new(&c, 3, vec![1, 3, 2, 4, 2, 4]).unwrap();
        assert!(!build_complex(&c, &col).unwrap().orientable_by_propagation());
    }

    #[test]
    fn too_large() {
        let p = prism(16).unwrap();
        assert!(matches!(
            build_complex(&p, &VectorColoring::identity(&p)),
            Err(OracleError::TooLarge { rank: 18, cap: 16 })
        ));
    }

    #[test]
    fn klein_bottle_polygon() {
        let s = surface_complex(&[1, 2, 1, 3]).unwrap();
        assert_eq!((s.euler_characteristic, s.orientable, s.components), (0, false, 1));
        let t = surface_complex(&[1, 2, 4, 7]).unwrap();
        assert_eq!((t.euler_characteristic, t.orientable, t.genus), (0, true, 1));
    }

    #[test]
    fn self_checks_pass() {
        for r in check_all() {
            assert!(r.passed, "{r:?}");
        }
    }
}
