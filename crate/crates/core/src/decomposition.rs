//! Classification of polytopes and their two decompositions: along all
//! 3-belts (prime pieces) and along the canonical family of 4-belts.

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::belts::{cut_along_family, enumerate_belts, is_trivial, Belt, BeltError, Piece};
use crate::polytope::{shrink_triangle, FacetId, FacetTracking, Provenance, SimplePolytope, SurgeryError, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("polytope is not flag")]
    NotFlag,
    #[error("the cube has no canonical 4-belt decomposition")]
    IsCube,
    #[error("vertex {0:?} lies on three quadrangles")]
    VertexInThreeQuadrangles(Vertex),
    #[error(transparent)]
    Belt(#[from] BeltError),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FlagKind {
    Cube,
    Prism { k: usize },
    Pogorelov,
    AlmostPogorelov,
    Generic { witness: Belt },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Classification {
    Simplex,
    NonFlag { witness: Belt },
    Flag { kind: FlagKind },
}

/// A prism with its pair of bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrismShape {
    pub k: usize,
    pub bases: [FacetId; 2],
}

/// Detects a `k`-prism: two disjoint `k`-gons, all other facets quadrangles
/// meeting both. For the cube the least pair of opposite facets is used.
pub fn recognize_prism(p: &SimplePolytope) -> Option<PrismShape> {
    let m = p.m();
    if m < 5 {
        return None;
    }
    let k = m - 2;
    let big: Vec<FacetId> = (0..m).filter(|&f| p.facet_size(f) == k).collect();
    for (i, &a) in big.iter().enumerate() {
        for &b in &big[i + 1..] {
            if p.adjacent(a, b) {
                continue;
            }
            let ring = (0..m)
                .filter(|&f| f != a && f != b)
                .all(|f| p.facet_size(f) == 4 && p.adjacent(f, a) && p.adjacent(f, b));
            if ring {
                return Some(PrismShape { k, bases: [a, b] });
            }
        }
    }
    None
}

pub fn is_flag(p: &SimplePolytope) -> bool {
    p.m() > 4 && enumerate_belts(p, 3).is_empty()
}

pub fn classify_polytope(p: &SimplePolytope) -> Classification {
    if p.m() == 4 {
        return Classification::Simplex;
    }
    if let Some(w) = enumerate_belts(p, 3).into_iter().next() {
        return Classification::NonFlag { witness: w };
    }
    let kind = if p.m() == 6 {
        FlagKind::Cube
    } else if let Some(s) = recognize_prism(p) {
        FlagKind::Prism { k: s.k }
    } else {
        let four = enumerate_belts(p, 4);
        if four.is_empty() {
            FlagKind::Pogorelov
        } else if let Some(w) = four.iter().find(|b| !is_trivial(p, b)) {
            FlagKind::Generic { witness: w.clone() }
        } else {
            FlagKind::AlmostPogorelov
        }
    };
    Classification::Flag { kind }
}

/// A maximal sequence of quadrangles, each adjacent to the next along
/// opposite edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadrangleChain {
    pub quadrangles: Vec<FacetId>,
    /// The chain closes up (the polytope is a prism).
    pub ring: bool,
    /// The 4-belt around an open chain.
    pub surrounding: Option<Belt>,
}

/// Chains of at least two adjacent quadrangles in a flag polytope other
/// than the cube.
pub fn quadrangle_sequences(p: &SimplePolytope) -> Result<Vec<QuadrangleChain>, DecompositionError> {
    let quad: Vec<bool> = (0..p.m()).map(|f| p.is_quadrangle(f)).collect();
    if let Some(v) = p.vertices().iter().find(|v| v.iter().all(|&f| quad[f])) {
        return Err(DecompositionError::VertexInThreeQuadrangles(*v));
    }
    let qn = |f: FacetId| -> Vec<FacetId> { p.neighbours(f).iter().copied().filter(|&g| quad[g]).collect() };
    let mut done = vec![false; p.m()];
    let mut out = Vec::new();
    // open chains first from their endpoints, then rings
    for pass in 0..2 {
        for s in 0..p.m() {
            if !quad[s] || done[s] {
                continue;
            }
            let deg = qn(s).len();
            if deg == 0 || (pass == 0 && deg != 1) {
                continue;
            }
            let mut chain = vec![s];
            done[s] = true;
            let mut cur = s;
            loop {
                let next = qn(cur).into_iter().filter(|&g| !done[g]).min();
                match next {
                    Some(g) => {
                        done[g] = true;
                        chain.push(g);
                        cur = g;
                    }
                    None => break,
                }
            }
            let ring = pass == 1;
            let surrounding = if ring { None } else { Some(surrounding_belt(p, &chain)?) };
            out.push(QuadrangleChain { quadrangles: chain, ring, surrounding });
        }
    }
    Ok(out)
}

fn opposite(p: &SimplePolytope, q: FacetId, g: FacetId) -> (FacetId, FacetId, FacetId) {
    let c = p.neighbours(q);
    let i = c.iter().position(|&x| x == g).unwrap();
    (c[(i + 2) % 4], c[(i + 1) % 4], c[(i + 3) % 4])
}

fn surrounding_belt(p: &SimplePolytope, chain: &[FacetId]) -> Result<Belt, DecompositionError> {
    let t = chain.len();
    let (z, x, y) = opposite(p, chain[0], chain[1]);
    let (w, _, _) = opposite(p, chain[t - 1], chain[t - 2]);
    Belt::new(p, &[x, z, y, w]).map_err(|e| DecompositionError::Internal(format!("surrounding belt: {e}")))
}

/// A leaf of the prime decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeLeaf {
    #[serde(skip)]
    pub polytope: SimplePolytope,
    /// Facet of the original polytope carried by each leaf facet.
    pub parents: Vec<FacetId>,
    pub simplex: bool,
}

/// Decomposition along all 3-belts. Leaves are simplices or flag
/// polytopes; belt `i` joins leaves `joins[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeTree {
    pub belts: Vec<Belt>,
    pub leaves: Vec<PrimeLeaf>,
    pub joins: Vec<(usize, usize)>,
}

pub fn prime_decompose(p: &SimplePolytope) -> Result<PrimeTree, DecompositionError> {
    prime_decompose_along(p, enumerate_belts(p, 3))
}

/// Prime decomposition cutting along the 3-belts in the given order.
pub fn prime_decompose_along(p: &SimplePolytope, belts: Vec<Belt>) -> Result<PrimeTree, DecompositionError> {
    let pieces = cut_along_family(p, &belts)?;
    let mut leaves = Vec::with_capacity(pieces.len());
    let mut ends: Vec<Vec<usize>> = vec![Vec::new(); belts.len()];
    for (i, piece) in pieces.into_iter().enumerate() {
        let mut news = piece.tracking.new_facets();
        for &(_, b) in &news {
            ends[b].push(i);
        }
        news.sort_by_key(|x| std::cmp::Reverse(x.0));
        let mut poly = piece.polytope;
        let mut prov = piece.tracking.0;
        for (f, _) in news {
            let (q, _) = shrink_triangle(&poly, f)?;
            poly = q;
            prov.remove(f);
        }
        let parents: Vec<FacetId> = prov
            .iter()
            .map(|pr| pr.parent().ok_or_else(|| DecompositionError::Internal("new facet left in a leaf".into())))
            .collect::<Result<_, _>>()?;
        let simplex = poly.m() == 4;
        if !simplex && !is_flag(&poly) {
            return Err(DecompositionError::Internal("leaf is neither a simplex nor flag".into()));
        }
        leaves.push(PrimeLeaf { polytope: poly, parents, simplex });
    }
    let joins = ends
        .into_iter()
        .map(|e| match e.as_slice() {
            [a, b] => Ok((*a, *b)),
            _ => Err(DecompositionError::Internal("belt without two sides".into())),
        })
        .collect::<Result<_, _>>()?;
    Ok(PrimeTree { belts, leaves, joins })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PieceKind {
    Prism { k: usize, bases: [FacetId; 2] },
    AlmostPogorelov,
    Pogorelov,
}

/// A piece of the canonical decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionPiece {
    #[serde(skip)]
    pub polytope: SimplePolytope,
    pub tracking: FacetTracking,
    pub kind: PieceKind,
    /// New quadrangles of the piece with the index of their belt.
    pub belt_quadrangles: Vec<(FacetId, usize)>,
    /// Quadrangles of an almost Pogorelov piece that do not come from cuts.
    pub free_quadrangles: Vec<FacetId>,
}

impl DecompositionPiece {
    /// Facets of the original polytope that survive in this piece as
    /// non-quadrangle-deleted facets: all facets except new quadrangles and
    /// free quadrangles.
    pub fn kept_parents(&self) -> Vec<FacetId> {
        (0..self.polytope.m())
            .filter(|f| !self.free_quadrangles.contains(f))
            .filter_map(|f| self.tracking.parent(f))
            .collect()
    }

    pub fn parent_of(&self, f: FacetId) -> Option<FacetId> {
        self.tracking.parent(f)
    }
}

/// Whether the two prism pieces adjacent along a belt have their bases on
/// different facets of the belt.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistRecord {
    pub belt: usize,
    pub pieces: (usize, usize),
    /// Base facets (of the original polytope) on each side.
    pub bases: ([FacetId; 2], [FacetId; 2]),
    pub twisted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalDecomposition {
    pub belts: Vec<Belt>,
    pub pieces: Vec<DecompositionPiece>,
    pub twists: Vec<TwistRecord>,
}

impl CanonicalDecomposition {
    /// Pieces on the two sides of belt `b`.
    pub fn sides_of(&self, b: usize) -> (usize, usize) {
        let v: Vec<usize> = (0..self.pieces.len())
            .filter(|&i| self.pieces[i].belt_quadrangles.iter().any(|&(_, c)| c == b))
            .collect();
        (v[0], v[1])
    }
}

/// The canonical decomposition, making every choice by lowest index.
pub fn canonical_4belt_decomposition(p: &SimplePolytope) -> Result<CanonicalDecomposition, DecompositionError> {
    decompose_with(p, &mut |_| 0)
}

/// The canonical decomposition with random choices at every step. The
/// resulting family does not depend on them.
pub fn canonical_4belt_decomposition_randomized<R: Rng>(
    p: &SimplePolytope,
    rng: &mut R,
) -> Result<CanonicalDecomposition, DecompositionError> {
    decompose_with(p, &mut |n| rng.gen_range(0..n))
}

fn parent_belt(p: &SimplePolytope, piece: &Piece, belt: &Belt) -> Result<Belt, DecompositionError> {
    let facets: Vec<FacetId> = belt
        .facets()
        .iter()
        .map(|&f| piece.tracking.parent(f))
        .collect::<Option<_>>()
        .ok_or_else(|| DecompositionError::Internal("cut belt through a new facet".into()))?;
    Belt::new(p, &facets).map_err(|e| DecompositionError::Internal(format!("belt does not lift: {e}")))
}

fn prism_bases(piece: &Piece) -> Option<[FacetId; 2]> {
    let s = recognize_prism(&piece.polytope)?;
    if s.k < 5 {
        return None;
    }
    let a = piece.tracking.parent(s.bases[0])?;
    let b = piece.tracking.parent(s.bases[1])?;
    Some([a.min(b), a.max(b)])
}

fn decompose_with(
    p: &SimplePolytope,
    choose: &mut dyn FnMut(usize) -> usize,
) -> Result<CanonicalDecomposition, DecompositionError> {
    match classify_polytope(p) {
        Classification::Flag { kind: FlagKind::Cube } => return Err(DecompositionError::IsCube),
        Classification::Flag { .. } => {}
        _ => return Err(DecompositionError::NotFlag),
    }
    let mut family: Vec<Belt> = Vec::new();
    // cut off chains of quadrangles, then nontrivial 4-belts without
    // quadrangles, until every piece is a prism or almost Pogorelov
    loop {
        let pieces = cut_along_family(p, &family)?;
        let mut chains = Vec::new();
        let mut plain = Vec::new();
        for piece in &pieces {
            let q = &piece.polytope;
            if q.m() == 6 {
                return Err(DecompositionError::Internal("cube piece".into()));
            }
            if recognize_prism(q).is_some() {
                continue;
            }
            for c in quadrangle_sequences(q)? {
                if let Some(b) = c.surrounding {
                    chains.push(parent_belt(p, piece, &b)?);
                }
            }
            if chains.is_empty() {
                for b in enumerate_belts(q, 4) {
                    if !b.facets().iter().any(|&f| q.is_quadrangle(f)) && !is_trivial(q, &b) {
                        plain.push(parent_belt(p, piece, &b)?);
                    }
                }
            }
        }
        let pool = if chains.is_empty() { plain } else { chains };
        if pool.is_empty() {
            break;
        }
        let pick = choose(pool.len());
        family.push(pool[pick].clone());
    }
    // glue back prisms meeting base to base
    loop {
        let pieces = cut_along_family(p, &family)?;
        let owners = owners(&pieces, family.len());
        let untwisted: Vec<usize> = (0..family.len())
            .filter(|&b| {
                let (i, j) = owners[b];
                matches!((prism_bases(&pieces[i]), prism_bases(&pieces[j])), (Some(x), Some(y)) if x == y)
            })
            .collect();
        if untwisted.is_empty() {
            break;
        }
        let pick = choose(untwisted.len());
        family.remove(untwisted[pick]);
    }
    family.sort();
    finish(p, family)
}

fn owners(pieces: &[Piece], n: usize) -> Vec<(usize, usize)> {
    let mut ends: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, piece) in pieces.iter().enumerate() {
        for (_, b) in piece.tracking.new_facets() {
            ends[b].push(i);
        }
    }
    ends.into_iter().map(|e| (e[0], e[1])).collect()
}

fn finish(p: &SimplePolytope, family: Vec<Belt>) -> Result<CanonicalDecomposition, DecompositionError> {
    let pieces = cut_along_family(p, &family)?;
    let own = owners(&pieces, family.len());
    let mut twists = Vec::new();
    for (b, &(i, j)) in own.iter().enumerate() {
        if let (Some(x), Some(y)) = (prism_bases(&pieces[i]), prism_bases(&pieces[j])) {
            twists.push(TwistRecord { belt: b, pieces: (i, j), bases: (x, y), twisted: x != y });
        }
    }
    let pieces = pieces
        .into_iter()
        .map(|piece| {
            let q = &piece.polytope;
            let belt_quadrangles = piece.tracking.new_facets();
            let (kind, free) = match recognize_prism(q) {
                Some(s) if s.k >= 5 => (PieceKind::Prism { k: s.k, bases: s.bases }, Vec::new()),
                _ => {
                    let free: Vec<FacetId> = (0..q.m())
                        .filter(|&f| q.is_quadrangle(f))
                        .filter(|&f| matches!(piece.tracking.get(f), Provenance::Original { .. }))
                        .collect();
                    let quads = (0..q.m()).any(|f| q.is_quadrangle(f));
                    (if quads { PieceKind::AlmostPogorelov } else { PieceKind::Pogorelov }, free)
                }
            };
            DecompositionPiece {
                polytope: piece.polytope,
                tracking: piece.tracking,
                kind,
                belt_quadrangles,
                free_quadrangles: free,
            }
        })
        .collect();
    Ok(CanonicalDecomposition { belts: family, pieces, twists })
}
