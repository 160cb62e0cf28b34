//! Topological invariants of the manifold glued from copies of a polytope
//! along a vector-colouring: prime decomposition, surfaces over belts,
//! JSJ tori and pieces, Seifert data of prism pieces.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::belts::Belt;
use crate::coloring::{ColoringError, VectorColoring};
use crate::decomposition::{
    canonical_4belt_decomposition, classify_polytope, prime_decompose, recognize_prism, CanonicalDecomposition,
    Classification, DecompositionError, FlagKind, PieceKind, PrimeTree,
};
use crate::polytope::{FacetId, SimplePolytope};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("colouring is not orientable")]
    NotOrientable,
    #[error("polytope is neither a simplex nor a triangular prism")]
    NotBaseCase,
    #[error("polytope has no global geometry of the supported kinds")]
    NotGlobalCase,
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Counts that may exceed the exact range of a double are written as
/// decimal strings.
pub(crate) fn big<S: Serializer>(v: &u128, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn pow2(e: usize) -> u128 {
    1u128 << e
}

fn span_dim(c: &VectorColoring, facets: &[FacetId]) -> usize {
    c.subspace(facets).dim()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ManifoldLabel {
    S3,
    RP3,
    S2xS1,
    #[serde(rename = "RP3#RP3")]
    RP3SumRP3,
    /// The manifold of a flag leaf of the prime decomposition, by index.
    Aspherical(usize),
}

fn require_orientable(c: &VectorColoring) -> Result<(), InvariantError> {
    if c.is_orientable() {
        Ok(())
    } else {
        Err(InvariantError::NotOrientable)
    }
}

/// The manifold over a simplex or a triangular prism.
pub fn base_case_manifold(p: &SimplePolytope, c: &VectorColoring) -> Result<ManifoldLabel, InvariantError> {
    require_orientable(c)?;
    let r = c.rank();
    if p.m() == 4 {
        return Ok(if r == 4 { ManifoldLabel::S3 } else { ManifoldLabel::RP3 });
    }
    let shape = recognize_prism(p).filter(|s| s.k == 3).ok_or(InvariantError::NotBaseCase)?;
    Ok(match r {
        5 => ManifoldLabel::S2xS1,
        3 => ManifoldLabel::RP3SumRP3,
        _ => {
            let sides: Vec<FacetId> = (0..5).filter(|f| !shape.bases.contains(f)).collect();
            let s = c.subspace(&sides);
            if shape.bases.iter().any(|&b| s.contains(c.column(b))) {
                ManifoldLabel::RP3SumRP3
            } else {
                ManifoldLabel::S2xS1
            }
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub label: ManifoldLabel,
    #[serde(serialize_with = "big")]
    pub exponent: u128,
}

/// A connected sum of powers of prime manifolds and copies of `S^2 x S^1`.
/// The empty sum is `S^3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeExpression {
    pub summands: Vec<Summand>,
    #[serde(serialize_with = "big")]
    pub handles: u128,
}

impl PrimeExpression {
    fn from_parts(parts: BTreeMap<ManifoldLabel, u128>, handles: u128) -> Self {
        let summands = parts
            .into_iter()
            .filter(|&(l, e)| l != ManifoldLabel::S3 && e > 0)
            .map(|(label, exponent)| Summand { label, exponent })
            .collect();
        PrimeExpression { summands, handles }
    }

    pub fn from_label(label: ManifoldLabel) -> Self {
        match label {
            ManifoldLabel::S2xS1 => Self::from_parts(BTreeMap::new(), 1),
            ManifoldLabel::RP3SumRP3 => Self::from_parts(BTreeMap::from([(ManifoldLabel::RP3, 2)]), 0),
            l => Self::from_parts(BTreeMap::from([(l, 1)]), 0),
        }
    }

    pub fn exponent_of(&self, label: ManifoldLabel) -> u128 {
        self.summands.iter().find(|s| s.label == label).map_or(0, |s| s.exponent)
    }

    pub fn is_sphere(&self) -> bool {
        self.summands.is_empty() && self.handles == 0
    }
}

impl std::fmt::Display for PrimeExpression {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self
            .summands
            .iter()
            .map(|s| {
                let name = match s.label {
                    ManifoldLabel::Aspherical(i) => format!("M{i}"),
                    l => format!("{l:?}"),
                };
                if s.exponent == 1 { name } else { format!("{name}^{}", s.exponent) }
            })
            .collect();
        if self.handles > 0 {
            parts.push(if self.handles == 1 { "S2xS1".into() } else { format!("S2xS1^{}", self.handles) });
        }
        if parts.is_empty() {
            write!(f, "S3")
        } else {
            write!(f, "{}", parts.join(" # "))
        }
    }
}

fn leaf_label(tree: &PrimeTree, i: usize, r_leaf: usize) -> ManifoldLabel {
    if tree.leaves[i].simplex {
        if r_leaf == 4 { ManifoldLabel::S3 } else { ManifoldLabel::RP3 }
    } else {
        ManifoldLabel::Aspherical(i)
    }
}

/// Prime decomposition with the leaf colourings' ranks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeReport {
    pub tree: PrimeTree,
    pub leaf_ranks: Vec<usize>,
    pub expression: PrimeExpression,
}

/// Prime decomposition of the manifold: flag leaves give aspherical
/// summands, simplex leaves give `S^3` or `RP^3`; every summand is raised
/// to `2^{r - r_leaf}` and the tree contributes copies of `S^2 x S^1`.
pub fn prime_expression(p: &SimplePolytope, c: &VectorColoring) -> Result<PrimeReport, InvariantError> {
    require_orientable(c)?;
    let tree = prime_decompose(p)?;
    let r = c.rank();
    let leaf_ranks: Vec<usize> = tree.leaves.iter().map(|l| span_dim(c, &l.parents)).collect();
    let expression = if p.m() == 4 || recognize_prism(p).is_some_and(|s| s.k == 3) {
        PrimeExpression::from_label(base_case_manifold(p, c)?)
    } else {
        let mut parts = BTreeMap::new();
        let mut sub: u128 = 0;
        for (i, &ri) in leaf_ranks.iter().enumerate() {
            *parts.entry(leaf_label(&tree, i, ri)).or_insert(0) += pow2(r - ri);
            sub += pow2(r - ri);
        }
        let handles = (tree.belts.len() as u128 * pow2(r - 3) + 1)
            .checked_sub(sub)
            .ok_or_else(|| InvariantError::Internal("negative handle count".into()))?;
        PrimeExpression::from_parts(parts, handles)
    };
    Ok(PrimeReport { tree, leaf_ranks, expression })
}

/// The same expression computed by splitting the tree one belt at a time and
/// applying the formula for a single connected sum at each split.
pub fn prime_expression_by_splitting(tree: &PrimeTree, c: &VectorColoring) -> Result<PrimeExpression, InvariantError> {
    require_orientable(c)?;
    let leaves: Vec<usize> = (0..tree.leaves.len()).collect();
    let belts: Vec<usize> = (0..tree.belts.len()).collect();
    let (parts, handles) = split(tree, c, &leaves, &belts)?;
    Ok(PrimeExpression::from_parts(parts, handles))
}

fn union_rank(tree: &PrimeTree, c: &VectorColoring, leaves: &[usize]) -> usize {
    let facets: Vec<FacetId> = leaves.iter().flat_map(|&l| tree.leaves[l].parents.iter().copied()).collect();
    span_dim(c, &facets)
}

fn split(
    tree: &PrimeTree,
    c: &VectorColoring,
    leaves: &[usize],
    belts: &[usize],
) -> Result<(BTreeMap<ManifoldLabel, u128>, u128), InvariantError> {
    let rt = union_rank(tree, c, leaves);
    let Some((&b, rest)) = belts.split_first() else {
        let l = leaves[0];
        return Ok((BTreeMap::from([(leaf_label(tree, l, rt), 1)]), 0));
    };
    // side of joins[b].0, not crossing b
    let mut side = vec![tree.joins[b].0];
    let mut i = 0;
    while i < side.len() {
        let x = side[i];
        for &e in rest {
            let (u, v) = tree.joins[e];
            for (from, to) in [(u, v), (v, u)] {
                if from == x && !side.contains(&to) {
                    side.push(to);
                }
            }
        }
        i += 1;
    }
    let other: Vec<usize> = leaves.iter().copied().filter(|l| !side.contains(l)).collect();
    let in_side = |e: &usize| side.contains(&tree.joins[*e].0) && side.contains(&tree.joins[*e].1);
    let b1: Vec<usize> = rest.iter().copied().filter(in_side).collect();
    let b2: Vec<usize> = rest.iter().copied().filter(|e| !in_side(e)).collect();
    side.sort_unstable();
    let mut parts = BTreeMap::new();
    let mut handles: i128 = pow2(rt - 3) as i128 + 1;
    for (ls, bs) in [(side, b1), (other, b2)] {
        let ri = union_rank(tree, c, &ls);
        let scale = pow2(rt - ri);
        let (sub, h) = split(tree, c, &ls, &bs)?;
        for (l, e) in sub {
            *parts.entry(l).or_insert(0) += e * scale;
        }
        handles += (h * scale) as i128 - scale as i128;
    }
    let handles = u128::try_from(handles).map_err(|_| InvariantError::Internal("negative handle count".into()))?;
    Ok((parts, handles))
}

/// Surfaces glued from copies of the polygon inside a belt.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BeltSurface {
    pub k: usize,
    pub span_dim: usize,
    #[serde(serialize_with = "big")]
    pub components: u128,
    pub orientable: bool,
    /// Genus when orientable, number of cross-caps otherwise.
    pub genus: u128,
}

pub fn belt_surface(c: &VectorColoring, belt: &Belt) -> BeltSurface {
    let k = belt.len();
    let rb = span_dim(c, belt.facets());
    let cols: Vec<u64> = belt.facets().iter().map(|&f| c.column(f)).collect();
    let orientable = crate::gf2::solve_all_ones(&cols).is_some();
    let grow = (k as u128 - 4) << rb;
    let genus = if orientable { 1 + grow / 8 } else { 2 + grow / 4 };
    BeltSurface { k, span_dim: rb, components: pow2(c.rank() - rb), orientable, genus }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BeltTori {
    pub belt: Belt,
    pub span_dim: usize,
    #[serde(serialize_with = "big")]
    pub tori: u128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FreeKind {
    /// The quadrangle's vector leaves the span of its belt: tori with a
    /// product neighbourhood.
    Tori,
    /// The vector lies in the span: Klein bottles, bounded by tori.
    KleinBottles,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeQuadrangleSurfaces {
    pub piece: usize,
    /// Facet of the original polytope.
    pub facet: FacetId,
    pub belt: Belt,
    pub belt_span_dim: usize,
    pub facet_span_dim: usize,
    pub kind: FreeKind,
    /// Tori or Klein bottles, by `kind`.
    #[serde(serialize_with = "big")]
    pub surfaces: u128,
    /// JSJ tori contributed: the tori themselves, or the boundaries of the
    /// Klein bottle neighbourhoods.
    #[serde(serialize_with = "big")]
    pub jsj_tori: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeifertData {
    pub k: usize,
    /// Number of base edges not coming from canonical belts.
    pub k_prime: usize,
    /// Pairs of adjacent side facets whose common vertical edges give
    /// singular fibres of order 2.
    pub singular_vertices: Vec<(FacetId, FacetId)>,
    #[serde(serialize_with = "big")]
    pub singular_fibers_per_copy: u128,
    #[serde(serialize_with = "big")]
    pub boundary_per_copy: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PieceGeometry {
    H3,
    H2xR,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JsjPiece {
    pub piece: usize,
    pub geometry: PieceGeometry,
    pub span_dim: usize,
    #[serde(serialize_with = "big")]
    pub multiplicity: u128,
    /// Cusps (boundary tori) of each copy.
    #[serde(serialize_with = "big")]
    pub boundary_per_copy: u128,
    pub closed: bool,
    pub seifert: Option<SeifertData>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JsjReport {
    pub rank: usize,
    pub belts: Vec<BeltTori>,
    pub free_quadrangles: Vec<FreeQuadrangleSurfaces>,
    pub pieces: Vec<JsjPiece>,
    #[serde(serialize_with = "big")]
    pub tori1: u128,
    #[serde(serialize_with = "big")]
    pub tori2: u128,
    #[serde(serialize_with = "big")]
    pub klein3: u128,
}

impl JsjReport {
    /// Boundary components over all pieces, counted with multiplicity.
    pub fn total_boundary(&self) -> u128 {
        self.pieces.iter().map(|p| p.multiplicity * p.boundary_per_copy).sum()
    }

    /// What the total boundary must be: each torus between pieces is seen
    /// twice, each Klein bottle neighbourhood boundary once.
    pub fn expected_boundary(&self) -> u128 {
        let type3: u128 = self
            .free_quadrangles
            .iter()
            .filter(|f| f.kind == FreeKind::KleinBottles)
            .map(|f| f.jsj_tori)
            .sum();
        2 * self.tori1 + 2 * self.tori2 + type3
    }
}

pub fn jsj_report(p: &SimplePolytope, c: &VectorColoring) -> Result<JsjReport, InvariantError> {
    let d = canonical_4belt_decomposition(p)?;
    jsj_from_decomposition(p, c, &d)
}

pub fn jsj_from_decomposition(
    p: &SimplePolytope,
    c: &VectorColoring,
    d: &CanonicalDecomposition,
) -> Result<JsjReport, InvariantError> {
    require_orientable(c)?;
    let r = c.rank();
    let belts: Vec<BeltTori> = d
        .belts
        .iter()
        .map(|b| {
            let rb = span_dim(c, b.facets());
            BeltTori { belt: b.clone(), span_dim: rb, tori: pow2(r - rb) }
        })
        .collect();
    let mut free = Vec::new();
    for (i, piece) in d.pieces.iter().enumerate() {
        for &q in &piece.free_quadrangles {
            let f = piece.parent_of(q).unwrap();
            let belt = Belt::new(p, p.neighbours(f)).map_err(|e| InvariantError::Internal(e.to_string()))?;
            let s = c.subspace(belt.facets());
            let rb = s.dim();
            let (kind, rf) = if s.contains(c.column(f)) { (FreeKind::KleinBottles, rb) } else { (FreeKind::Tori, rb + 1) };
            free.push(FreeQuadrangleSurfaces {
                piece: i,
                facet: f,
                belt,
                belt_span_dim: rb,
                facet_span_dim: rf,
                kind,
                surfaces: pow2(r - rf),
                jsj_tori: if kind == FreeKind::Tori { pow2(r - rf) } else { pow2(r - rb) },
            });
        }
    }
    let mut pieces = Vec::new();
    for (i, piece) in d.pieces.iter().enumerate() {
        let ri = span_dim(c, &piece.kept_parents());
        let mut boundary: u128 = piece.belt_quadrangles.iter().map(|&(_, b)| pow2(ri - belts[b].span_dim)).sum();
        boundary += free.iter().filter(|f| f.piece == i).map(|f| pow2(ri - f.belt_span_dim)).sum::<u128>();
        let (geometry, seifert) = match piece.kind {
            PieceKind::Prism { k, bases } => (PieceGeometry::H2xR, Some(seifert_data(piece, k, bases, c, ri, boundary)?)),
            _ => (PieceGeometry::H3, None),
        };
        pieces.push(JsjPiece {
            piece: i,
            geometry,
            span_dim: ri,
            multiplicity: pow2(r - ri),
            boundary_per_copy: boundary,
            closed: boundary == 0,
            seifert,
        });
    }
    let tori1 = belts.iter().map(|b| b.tori).sum();
    let tori2 = free.iter().filter(|f| f.kind == FreeKind::Tori).map(|f| f.surfaces).sum();
    let klein3 = free.iter().filter(|f| f.kind == FreeKind::KleinBottles).map(|f| f.surfaces).sum();
    Ok(JsjReport { rank: r, belts, free_quadrangles: free, pieces, tori1, tori2, klein3 })
}

fn seifert_data(
    piece: &crate::decomposition::DecompositionPiece,
    k: usize,
    bases: [FacetId; 2],
    c: &VectorColoring,
    ri: usize,
    boundary: u128,
) -> Result<SeifertData, InvariantError> {
    let q = &piece.polytope;
    let sides = q.neighbours(bases[0]);
    let (lp, lq) = (c.column(piece.parent_of(bases[0]).unwrap()), c.column(piece.parent_of(bases[1]).unwrap()));
    let regular: Vec<Option<FacetId>> = sides.iter().map(|&s| piece.parent_of(s)).collect();
    let k_prime = regular.iter().filter(|x| x.is_some()).count();
    let mut singular = Vec::new();
    if lp != lq {
        for t in 0..k {
            if let (Some(a), Some(b)) = (regular[t], regular[(t + 1) % k]) {
                let (la, lb) = (c.column(a), c.column(b));
                if crate::gf2::rank([la, lb, lp, lq]) == 3 {
                    if lq != la ^ lb ^ lp {
                        return Err(InvariantError::Internal("singular fibre without orientability".into()));
                    }
                    singular.push((a.min(b), a.max(b)));
                }
            }
        }
    }
    let per = singular.len() as u128 * pow2(ri - 3);
    Ok(SeifertData { k, k_prime, singular_vertices: singular, singular_fibers_per_copy: per, boundary_per_copy: boundary })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Geometry {
    S3,
    S2xR,
    R3,
    H2xR,
    H3,
}

/// Geometry of the manifold when it is one of Thurston's geometries
/// independently of the colouring.
pub fn global_geometry(p: &SimplePolytope) -> Result<Geometry, InvariantError> {
    match classify_polytope(p) {
        Classification::Simplex => Ok(Geometry::S3),
        Classification::NonFlag { .. } if recognize_prism(p).is_some_and(|s| s.k == 3) => Ok(Geometry::S2xR),
        Classification::Flag { kind: FlagKind::Cube } => Ok(Geometry::R3),
        Classification::Flag { kind: FlagKind::Prism { .. } } => Ok(Geometry::H2xR),
        Classification::Flag { kind: FlagKind::Pogorelov } => Ok(Geometry::H3),
        _ => Err(InvariantError::NotGlobalCase),
    }
}
