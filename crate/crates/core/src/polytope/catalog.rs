//! Named polytopes.
//!
//! Prism facets are numbered top `0`, bottom `1`, then the sides `2..k+2` in
//! cyclic order.

use super::{cut_edge, SimplePolytope};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog polytope {0:?}")]
    Unknown(String),
    #[error("prism needs k >= 3, got {0}")]
    PrismTooSmall(usize),
}

pub fn simplex() -> SimplePolytope {
    SimplePolytope::new(4, vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).unwrap()
}

/// Side facet `i` (0-based) of a prism.
pub fn prism_side(i: usize) -> usize {
    i + 2
}

/// The k-gonal prism, `k >= 3`.
pub fn prism(k: usize) -> Result<SimplePolytope, CatalogError> {
    if k < 3 {
        return Err(CatalogError::PrismTooSmall(k));
    }
    let mut t = Vec::with_capacity(2 * k);
    for i in 0..k {
        let (a, b) = (prism_side(i), prism_side((i + 1) % k));
        t.push([0, a, b]);
        t.push([1, a, b]);
    }
    Ok(SimplePolytope::new(k + 2, t).unwrap())
}

pub fn cube() -> SimplePolytope {
    prism(4).unwrap()
}

/// The 3-dimensional associahedron: a cube with three pairwise orthogonal,
/// pairwise disjoint edges cut off.
pub fn associahedron3() -> SimplePolytope {
    // cube facets: top 0, bottom 1, sides 2,3,4,5; opposite pairs are
    // (0,1), (2,4), (3,5). Cut edges 2∩3 (vertical), 4∩0 and 5∩1.
    let c = cube();
    let (c, _) = cut_edge(&c, 2, 3).unwrap();
    let (c, _) = cut_edge(&c, 0, 4).unwrap();
    let (c, _) = cut_edge(&c, 1, 5).unwrap();
    c
}

/// The dodecahedron, as the dual of the icosahedron.
pub fn dodecahedron() -> SimplePolytope {
    // icosahedron vertices: 0 top, 1..=5 upper ring, 6..=10 lower ring, 11 bottom
    let up = |i: usize| 1 + i % 5;
    let lo = |i: usize| 6 + i % 5;
    let mut t = Vec::with_capacity(20);
    for i in 0..5 {
        t.push([0, up(i), up(i + 1)]);
        t.push([11, lo(i), lo(i + 1)]);
        t.push([up(i), up(i + 1), lo(i)]);
        t.push([up(i + 1), lo(i), lo(i + 1)]);
    }
    SimplePolytope::new(12, t).unwrap()
}

/// Resolves names like `simplex`, `cube`, `prism:5`, `associahedron3`,
/// `dodecahedron`, with or without a leading `@`.
pub fn by_name(name: &str) -> Result<SimplePolytope, CatalogError> {
    let n = name.strip_prefix('@').unwrap_or(name);
    match n {
        "simplex" => Ok(simplex()),
        "cube" => Ok(cube()),
        "associahedron3" => Ok(associahedron3()),
        "dodecahedron" => Ok(dodecahedron()),
        _ => {
            if let Some(k) = n.strip_prefix("prism:") {
                let k: usize = k.parse().map_err(|_| CatalogError::Unknown(name.to_string()))?;
                prism(k)
            } else {
                Err(CatalogError::Unknown(name.to_string()))
            }
        }
    }
}

pub const NAMES: [&str; 5] = ["simplex", "prism:K", "cube", "associahedron3", "dodecahedron"];
