//! JSON reports. Facets are numbered from 1 as in the input formats; piece,
//! leaf and belt indices are positions in their arrays, from 0.

use serde_json::{json, Value};

use colorfold_core::belts::{is_trivial, surrounded_facets, Belt};
use colorfold_core::coloring::VectorColoring;
use colorfold_core::decomposition::{
    CanonicalDecomposition, Classification, FlagKind, PieceKind, PrimeTree,
};
use colorfold_core::invariants::{
    FreeKind, JsjReport, ManifoldLabel, PieceGeometry, PrimeExpression, PrimeReport,
};
use colorfold_core::io::{belt_to_json, coloring_to_json, polytope_to_json};
use colorfold_core::polytope::{FacetId, FacetTracking, Provenance, SimplePolytope};

fn one(f: FacetId) -> usize {
    f + 1
}

fn ones(fs: &[FacetId]) -> Vec<usize> {
    fs.iter().map(|&f| one(f)).collect()
}

fn count(n: u128) -> Value {
    Value::String(n.to_string())
}

pub fn classification(c: &Classification) -> Value {
    match c {
        Classification::Simplex => json!({ "class": "simplex" }),
        Classification::NonFlag { witness } => json!({ "class": "non_flag", "three_belt": belt_to_json(witness)["facets"] }),
        Classification::Flag { kind } => {
            let mut v = json!({ "class": "flag" });
            v["kind"] = match kind {
                FlagKind::Cube => json!("cube"),
                FlagKind::Prism { k } => json!(format!("prism:{k}")),
                FlagKind::Pogorelov => json!("pogorelov"),
                FlagKind::AlmostPogorelov => json!("almost_pogorelov"),
                FlagKind::Generic { witness } => {
                    v["four_belt"] = belt_to_json(witness)["facets"].clone();
                    json!("generic")
                }
            };
            v
        }
    }
}

pub fn belt_entry(p: &SimplePolytope, b: &Belt) -> Value {
    let mut v = belt_to_json(b);
    v["trivial"] = json!(is_trivial(p, b));
    v["surrounds"] = json!(ones(&surrounded_facets(p, b)));
    v
}

pub fn tracking(t: &FacetTracking) -> Value {
    Value::Array(
        t.0.iter()
            .map(|pr| match *pr {
                Provenance::Original { parent } => json!({ "kind": "original", "parent": one(parent) }),
                Provenance::BeltFacet { parent, belt } => json!({ "kind": "belt_facet", "parent": one(parent), "belt": belt }),
                Provenance::NewFacet { cut } => json!({ "kind": "new_facet", "belt": cut }),
            })
            .collect(),
    )
}

pub fn prime_tree(t: &PrimeTree) -> Value {
    let leaves: Vec<Value> = t
        .leaves
        .iter()
        .map(|l| json!({ "polytope": polytope_to_json(&l.polytope), "parents": ones(&l.parents), "simplex": l.simplex }))
        .collect();
    let belts: Vec<Value> = t
        .belts
        .iter()
        .zip(&t.joins)
        .map(|(b, &(u, v))| json!({ "facets": ones(b.facets()), "leaves": [u, v] }))
        .collect();
    json!({ "belts": belts, "leaves": leaves })
}

fn label(l: ManifoldLabel) -> Value {
    match l {
        ManifoldLabel::Aspherical(i) => json!({ "aspherical_leaf": i }),
        other => serde_json::to_value(other).unwrap(),
    }
}

pub fn prime_expression(e: &PrimeExpression) -> Value {
    let summands: Vec<Value> =
        e.summands.iter().map(|s| json!({ "manifold": label(s.label), "exponent": count(s.exponent) })).collect();
    json!({ "text": e.to_string(), "summands": summands, "s2xs1": count(e.handles), "sphere": e.is_sphere() })
}

pub fn prime_report(r: &PrimeReport) -> Value {
    let mut v = prime_expression(&r.expression);
    v["leaf_ranks"] = json!(r.leaf_ranks);
    v
}

fn piece_kind(k: &PieceKind) -> Value {
    match k {
        PieceKind::Prism { k, bases } => json!({ "kind": "prism", "k": k, "bases": ones(bases) }),
        PieceKind::AlmostPogorelov => json!({ "kind": "almost_pogorelov" }),
        PieceKind::Pogorelov => json!({ "kind": "pogorelov" }),
    }
}

pub fn canonical(d: &CanonicalDecomposition) -> Value {
    let pieces: Vec<Value> = d
        .pieces
        .iter()
        .map(|x| {
            let mut v = piece_kind(&x.kind);
            v["polytope"] = polytope_to_json(&x.polytope);
            v["tracking"] = tracking(&x.tracking);
            v["belt_quadrangles"] = x.belt_quadrangles.iter().map(|&(f, b)| json!({ "facet": one(f), "belt": b })).collect();
            v["free_quadrangles"] = json!(ones(&x.free_quadrangles));
            v
        })
        .collect();
    let twists: Vec<Value> = d
        .twists
        .iter()
        .map(|t| {
            json!({
                "belt": t.belt,
                "pieces": [t.pieces.0, t.pieces.1],
                "bases": [ones(&t.bases.0), ones(&t.bases.1)],
                "twisted": t.twisted,
            })
        })
        .collect();
    let belts: Vec<Value> = d.belts.iter().map(belt_to_json).collect();
    json!({ "belts": belts, "pieces": pieces, "twists": twists })
}

pub fn jsj(r: &JsjReport) -> Value {
    let tori1: Vec<Value> = r
        .belts
        .iter()
        .map(|b| json!({ "belt": ones(b.belt.facets()), "span_dim": b.span_dim, "tori": count(b.tori) }))
        .collect();
    let free = |kind: FreeKind| -> Vec<Value> {
        r.free_quadrangles
            .iter()
            .filter(|f| f.kind == kind)
            .map(|f| {
                json!({
                    "piece": f.piece,
                    "facet": one(f.facet),
                    "belt": ones(f.belt.facets()),
                    "belt_span_dim": f.belt_span_dim,
                    "facet_span_dim": f.facet_span_dim,
                    "surfaces": count(f.surfaces),
                    "jsj_tori": count(f.jsj_tori),
                })
            })
            .collect()
    };
    let pieces: Vec<Value> = r
        .pieces
        .iter()
        .map(|x| {
            let mut v = json!({
                "piece": x.piece,
                "geometry": match x.geometry { PieceGeometry::H3 => "H3", PieceGeometry::H2xR => "H2xR" },
                "span_dim": x.span_dim,
                "copies": count(x.multiplicity),
                "boundary_per_copy": count(x.boundary_per_copy),
                "closed": x.closed,
            });
            if let Some(s) = &x.seifert {
                v["seifert"] = json!({
                    "k": s.k,
                    "k_prime": s.k_prime,
                    "singular_vertices": s.singular_vertices.iter().map(|&(a, b)| [one(a), one(b)]).collect::<Vec<_>>(),
                    "singular_fibres_per_copy": count(s.singular_fibers_per_copy),
                });
            }
            v
        })
        .collect();
    json!({
        "rank": r.rank,
        "tori1": tori1,
        "tori2": free(FreeKind::Tori),
        "klein3": free(FreeKind::KleinBottles),
        "pieces": pieces,
        "totals": {
            "tori1": count(r.tori1),
            "tori2": count(r.tori2),
            "klein3": count(r.klein3),
            "boundary": count(r.total_boundary()),
            "expected_boundary": count(r.expected_boundary()),
        },
    })
}

pub fn coloring(c: &VectorColoring) -> Value {
    let mut v = coloring_to_json(c);
    v["rank"] = json!(c.rank());
    v["orientable"] = json!(c.is_orientable());
    v
}

/// Graphviz description of the prime tree.
pub fn prime_dot(t: &PrimeTree) -> String {
    let mut s = String::from("graph prime {\n");
    for (i, l) in t.leaves.iter().enumerate() {
        let name = if l.simplex { "simplex".to_string() } else { format!("m={}", l.polytope.m()) };
        s.push_str(&format!("  l{i} [label=\"{i}: {name}\"];\n"));
    }
    for (b, &(u, v)) in t.belts.iter().zip(&t.joins) {
        s.push_str(&format!("  l{u} -- l{v} [label=\"{:?}\"];\n", ones(b.facets())));
    }
    s.push_str("}\n");
    s
}

/// Graphviz description of the canonical decomposition.
pub fn canonical_dot(d: &CanonicalDecomposition) -> String {
    let mut s = String::from("graph jsj {\n");
    for (i, x) in d.pieces.iter().enumerate() {
        let name = match &x.kind {
            PieceKind::Prism { k, .. } => format!("prism {k}"),
            PieceKind::AlmostPogorelov => "almost pogorelov".into(),
            PieceKind::Pogorelov => "pogorelov".into(),
        };
        s.push_str(&format!("  p{i} [label=\"{i}: {name}\"];\n"));
    }
    for (b, belt) in d.belts.iter().enumerate() {
        let (u, v) = d.sides_of(b);
        let style = match d.twists.iter().find(|t| t.belt == b) {
            Some(t) if t.twisted => ", style=dashed",
            _ => "",
        };
        s.push_str(&format!("  p{u} -- p{v} [label=\"{:?}\"{style}];\n", ones(belt.facets())));
    }
    s.push_str("}\n");
    s
}
