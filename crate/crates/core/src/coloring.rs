//! Vector-colourings: an assignment of a nonzero vector of `Z_2^r` to every
//! facet such that the three vectors at each vertex are independent.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::gf2::{self, CoordinateBasis, Subspace};
use crate::polytope::{FacetId, FacetTracking, SimplePolytope, SumTracking, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("ambient dimension {0} outside 1..=64")]
    BadDimension(usize),
    #[error("expected {expected} columns, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("column of facet {0} is zero")]
    ZeroColumn(FacetId),
    #[error("column of facet {0} does not fit in the ambient dimension")]
    ColumnTooWide(FacetId),
    #[error("columns at vertex {0:?} are linearly dependent")]
    StarViolation(Vertex),
    #[error("facet {0} receives two different columns")]
    MergeConflict(FacetId),
    #[error("facet {0} has no column (new facet)")]
    MissingColumn(FacetId),
    #[error("colouring is already orientable")]
    AlreadyOrientable,
    #[error("colouring is not orientable")]
    NotOrientable,
    #[error("rank {rank} not attainable with {m} facets")]
    BadRank { rank: usize, m: usize },
}

/// Columns of a vector-colouring with ambient dimension `r`. Built with
/// [`VectorColoring::new`], which checks the condition at every vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct VectorColoring {
    r: usize,
    columns: Vec<u64>,
}

impl VectorColoring {
    /// Checks the columns against `p`.
    pub fn new(p: &SimplePolytope, r: usize, columns: Vec<u64>) -> Result<Self, ColoringError> {
        let c = Self::unchecked(r, columns)?;
        if c.columns.len() != p.m() {
            return Err(ColoringError::WrongLength { expected: p.m(), got: c.columns.len() });
        }
        if let Some(v) = star_violation(p, &c.columns) {
            return Err(ColoringError::StarViolation(v));
        }
        Ok(c)
    }

    /// Checks widths and nonzero columns only.
    pub(crate) fn unchecked(r: usize, columns: Vec<u64>) -> Result<Self, ColoringError> {
        if r == 0 || r > gf2::MAX_DIM {
            return Err(ColoringError::BadDimension(r));
        }
        for (f, &c) in columns.iter().enumerate() {
            if c == 0 {
                return Err(ColoringError::ZeroColumn(f));
            }
            if c & !gf2::low_mask(r) != 0 {
                return Err(ColoringError::ColumnTooWide(f));
            }
        }
        Ok(VectorColoring { r, columns })
    }

    /// `Λ_i = e_i`.
    pub fn identity(p: &SimplePolytope) -> Self {
        Self::new(p, p.m(), (0..p.m()).map(gf2::unit).collect()).expect("identity colouring")
    }

    /// Ambient dimension.
    pub fn ambient(&self) -> usize {
        self.r
    }

    pub fn columns(&self) -> &[u64] {
        &self.columns
    }

    pub fn column(&self, f: FacetId) -> u64 {
        self.columns[f]
    }

    /// Dimension of the span of all columns.
    pub fn rank(&self) -> usize {
        gf2::rank(self.columns.iter().copied())
    }

    /// Span of the columns of the given facets.
    pub fn subspace(&self, facets: &[FacetId]) -> Subspace {
        Subspace::spanned_by(facets.iter().map(|&f| self.columns[f]))
    }

    fn greedy_basis(&self) -> CoordinateBasis {
        let pos = gf2::greedy_basis_positions(&self.columns);
        CoordinateBasis::new(&pos.iter().map(|&i| self.columns[i]).collect::<Vec<_>>()).unwrap()
    }

    /// Columns in the coordinates of the greedy basis (first independent
    /// columns in facet order). Two colourings differ by a change of basis
    /// exactly when their normal forms agree.
    pub fn normal_form(&self) -> VectorColoring {
        let b = self.greedy_basis();
        let columns = self.columns.iter().map(|&c| b.coordinates(c).unwrap()).collect();
        VectorColoring { r: b.len(), columns }
    }

    /// Whether every column is a sum of an odd number of vectors of the
    /// greedy basis.
    pub fn is_orientable(&self) -> bool {
        let b = self.greedy_basis();
        self.columns.iter().all(|&c| gf2::weight(b.coordinates(c).unwrap()) % 2 == 1)
    }

    /// A linear functional taking the value 1 on every column, if any.
    pub fn orientation_functional(&self) -> Option<u64> {
        gf2::solve_all_ones(&self.columns)
    }

    /// An orientable colouring of rank one higher covering this one twice.
    pub fn orientation_double_cover(&self) -> Result<DoubleCover, ColoringError> {
        if self.r >= gf2::MAX_DIM {
            return Err(ColoringError::BadDimension(self.r + 1));
        }
        let b = self.greedy_basis();
        let even = |c: u64| gf2::weight(b.coordinates(c).unwrap()).is_multiple_of(2);
        let i0 = self.columns.iter().position(|&c| even(c)).ok_or(ColoringError::AlreadyOrientable)?;
        let base = self.columns[i0];
        let extra = gf2::unit(self.r);
        let columns = self.columns.iter().map(|&c| if even(c) { c ^ base ^ extra } else { c }).collect();
        Ok(DoubleCover {
            coloring: VectorColoring { r: self.r + 1, columns },
            projection: Projection { bit: self.r, image: base },
            pivot_facet: i0,
        })
    }

    /// Pulls the colouring back to a derived polytope. New facets have no
    /// column and are rejected.
    pub fn restrict(&self, target: &SimplePolytope, tracking: &FacetTracking) -> Result<Self, ColoringError> {
        let columns = (0..tracking.len())
            .map(|f| tracking.parent(f).map(|g| self.columns[g]).ok_or(ColoringError::MissingColumn(f)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(target, self.r, columns)
    }

    /// Columns of a derived polytope, `None` on new facets.
    pub fn partial(&self, tracking: &FacetTracking) -> Vec<Option<u64>> {
        (0..tracking.len()).map(|f| tracking.parent(f).map(|g| self.columns[g])).collect()
    }

    /// Combines colourings of two summands on their connected sum. Merged
    /// facets must carry the same column.
    pub fn glue(
        sum: &SimplePolytope,
        left: &VectorColoring,
        right: &VectorColoring,
        tracking: &SumTracking,
    ) -> Result<Self, ColoringError> {
        let r = left.r.max(right.r);
        let mut cols: Vec<Option<u64>> = vec![None; sum.m()];
        for (src, map) in [(left, &tracking.left), (right, &tracking.right)] {
            for (f, to) in map.iter().enumerate() {
                if let Some(x) = *to {
                    match cols[x] {
                        Some(c) if c != src.columns[f] => return Err(ColoringError::MergeConflict(x)),
                        _ => cols[x] = Some(src.columns[f]),
                    }
                }
            }
        }
        let columns = cols
            .into_iter()
            .enumerate()
            .map(|(f, c)| c.ok_or(ColoringError::MissingColumn(f)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(sum, r, columns)
    }

    /// Maximality: no surjection onto a space of one dimension less keeps
    /// the vertex condition. Tested through the projections that send all
    /// but one vector of a basis to the standard basis and the remaining one
    /// to an arbitrary vector.
    pub fn maximality(&self, p: &SimplePolytope) -> Maximality {
        let nf = self.normal_form();
        let r = nf.r;
        if r <= 3 {
            return Maximality { maximal: true, witness: None };
        }
        let mut cols = vec![0u64; nf.columns.len()];
        for j in 0..r {
            for a in 0..1u64 << (r - 1) {
                for (dst, &c) in cols.iter_mut().zip(&nf.columns) {
                    let low = c & gf2::low_mask(j);
                    let high = (c >> (j + 1)) << j;
                    *dst = low | high;
                    if c >> j & 1 == 1 {
                        *dst ^= a;
                    }
                }
                if cols.iter().all(|&c| c != 0) && star_violation(p, &cols).is_none() {
                    return Maximality { maximal: false, witness: Some((j, a)) };
                }
            }
        }
        Maximality { maximal: true, witness: None }
    }

    pub fn is_maximal(&self, p: &SimplePolytope) -> bool {
        self.maximality(p).maximal
    }
}

/// Returns a vertex whose three columns are dependent.
pub fn star_violation(p: &SimplePolytope, columns: &[u64]) -> Option<Vertex> {
    p.vertices().iter().copied().find(|v| {
        let [a, b, c] = v.map(|f| columns[f]);
        a == 0 || b == 0 || c == 0 || a == b || a == c || b == c || a ^ b == c
    })
}

/// Linear map `Z_2^{r+1} -> Z_2^r` dropping coordinate `bit` and adding
/// `image` when it was set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Projection {
    pub bit: usize,
    pub image: u64,
}

impl Projection {
    pub fn apply(&self, v: u64) -> u64 {
        let low = v & gf2::low_mask(self.bit);
        if v >> self.bit & 1 == 1 {
            low ^ self.image
        } else {
            low
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoubleCover {
    pub coloring: VectorColoring,
    pub projection: Projection,
    /// Facet of the even column used in the construction.
    pub pivot_facet: FacetId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Maximality {
    pub maximal: bool,
    /// `(j, a)`: basis vector `j` sent to `a` gives a colouring of lower rank.
    pub witness: Option<(usize, u64)>,
}

/// Result of a class enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Enumeration {
    pub classes: Vec<VectorColoring>,
    pub truncated: bool,
}

struct Search<'a> {
    order: Vec<FacetId>,
    // for position i: earlier neighbours and earlier vertex partner pairs
    nbrs: Vec<Vec<FacetId>>,
    pairs: Vec<Vec<(FacetId, FacetId)>>,
    rank: usize,
    odd_only: bool,
    cols: Vec<u64>,
    visit: &'a mut dyn FnMut(&[u64]) -> bool,
}

impl Search<'_> {
    fn new<'a>(p: &SimplePolytope, order: Vec<FacetId>, rank: usize, odd_only: bool, visit: &'a mut dyn FnMut(&[u64]) -> bool) -> Search<'a> {
        let mut at = vec![0; p.m()];
        for (i, &f) in order.iter().enumerate() {
            at[f] = i;
        }
        let mut nbrs = vec![Vec::new(); p.m()];
        let mut pairs = vec![Vec::new(); p.m()];
        for (i, &f) in order.iter().enumerate() {
            nbrs[i] = p.neighbours(f).iter().copied().filter(|&g| at[g] < i).collect();
        }
        for v in p.vertices() {
            let mut s = *v;
            s.sort_by_key(|&f| at[f]);
            pairs[at[s[2]]].push((s[0], s[1]));
        }
        Search { order, nbrs, pairs, rank, odd_only, cols: vec![0; p.m()], visit }
    }

    fn ok(&self, i: usize, v: u64) -> bool {
        self.nbrs[i].iter().all(|&g| self.cols[g] != v)
            && self.pairs[i].iter().all(|&(g, h)| {
                let (a, b) = (self.cols[g], self.cols[h]);
                v != a && v != b && v != a ^ b
            })
    }

    // returns false to stop
    fn run(&mut self, i: usize, d: usize) -> bool {
        let m = self.order.len();
        if i == m {
            return d < self.rank || (self.visit)(&self.cols);
        }
        if m - i < self.rank - d {
            return true;
        }
        let f = self.order[i];
        for v in 1..1u64 << d {
            if self.odd_only && v.count_ones() % 2 == 0 {
                continue;
            }
            if self.ok(i, v) {
                self.cols[f] = v;
                if !self.run(i + 1, d) {
                    return false;
                }
            }
        }
        if d < self.rank {
            let v = gf2::unit(d);
            if self.ok(i, v) {
                self.cols[f] = v;
                if !self.run(i + 1, d + 1) {
                    return false;
                }
            }
        }
        self.cols[f] = 0;
        true
    }
}

fn check_rank(p: &SimplePolytope, rank: usize) -> Result<(), ColoringError> {
    if rank < 3 || rank > p.m() || rank > gf2::MAX_DIM {
        return Err(ColoringError::BadRank { rank, m: p.m() });
    }
    Ok(())
}

/// Visits the normal form of every class of rank-`rank` colourings modulo
/// change of basis, in lexicographic order of their columns. Stops when
/// `visit` returns false.
pub fn for_each_class(
    p: &SimplePolytope,
    rank: usize,
    visit: &mut dyn FnMut(&[u64]) -> bool,
) -> Result<(), ColoringError> {
    check_rank(p, rank)?;
    Search::new(p, (0..p.m()).collect(), rank, false, visit).run(0, 0);
    Ok(())
}

/// All classes of colourings of the given rank modulo change of basis (not
/// modulo symmetries of `p`), at most `limit` of them.
pub fn enumerate_colorings(p: &SimplePolytope, rank: usize, limit: Option<usize>) -> Result<Enumeration, ColoringError> {
    let mut classes = Vec::new();
    let mut truncated = false;
    for_each_class(p, rank, &mut |cols| {
        if limit.is_some_and(|l| classes.len() >= l) {
            truncated = true;
            return false;
        }
        classes.push(VectorColoring { r: rank, columns: cols.to_vec() });
        true
    })?;
    Ok(Enumeration { classes, truncated })
}

/// Facets in breadth-first order from facet 0.
fn bfs_order(p: &SimplePolytope) -> Vec<FacetId> {
    let mut seen = vec![false; p.m()];
    let mut order = vec![0];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        for &g in p.neighbours(order[i]) {
            if !seen[g] {
                seen[g] = true;
                order.push(g);
            }
        }
        i += 1;
    }
    order
}

/// Finds one colouring of the given rank, optionally orientable, and
/// returns it in normal form.
pub fn search_coloring(p: &SimplePolytope, rank: usize, orientable: bool) -> Result<Option<VectorColoring>, ColoringError> {
    check_rank(p, rank)?;
    let mut found = None;
    let mut visit = |cols: &[u64]| {
        found = Some(cols.to_vec());
        false
    };
    Search::new(p, bfs_order(p), rank, orientable, &mut visit).run(0, 0);
    Ok(found.map(|c| VectorColoring { r: rank, columns: c }.normal_form()))
}

/// Orientable colouring of rank 3 (a small cover), if one is found.
pub fn search_small_cover(p: &SimplePolytope) -> Option<VectorColoring> {
    search_coloring(p, 3, true).ok().flatten()
}

/// Groups facets by column.
pub fn facets_by_column(c: &VectorColoring) -> HashMap<u64, Vec<FacetId>> {
    let mut out: HashMap<u64, Vec<FacetId>> = HashMap::new();
    for (f, &v) in c.columns.iter().enumerate() {
        out.entry(v).or_default().push(f);
    }
    out
}
