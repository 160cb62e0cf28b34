//! JSON formats. Facets are numbered from 1 in every file format.
//!
//! * polytope: `{"m": 6, "vertices": [[1, 3, 4], ...]}`
//! * colouring: `{"r": 3, "columns": [[0, 0, 1], ...]}` with bits most
//!   significant first, or `{"r": 3, "cols": [1, ...]}` with column `j`
//!   encoded as the integer whose bit `k` is coordinate `k + 1`
//! * belt: `{"facets": [1, 3, 2, 5]}`

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::belts::{Belt, BeltError};
use crate::coloring::{search_small_cover, ColoringError, VectorColoring};
use crate::polytope::catalog::{self, CatalogError};
use crate::polytope::{PolytopeError, SimplePolytope};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {message}")]
    File { path: String, message: String },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Belt(#[from] BeltError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("no orientable rank-3 colouring found")]
    NoSmallCover,
}

impl IoError {
    /// Short machine-readable name of the failure.
    pub fn kind(&self) -> String {
        let dbg = match self {
            IoError::Polytope(e) => format!("{e:?}"),
            IoError::Coloring(e) => format!("{e:?}"),
            IoError::Belt(e) => format!("{e:?}"),
            IoError::Catalog(e) => format!("{e:?}"),
            other => format!("{other:?}"),
        };
        dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolytopeFile {
    m: usize,
    vertices: Vec<[usize; 3]>,
}

fn one_based(i: usize) -> Result<usize, IoError> {
    i.checked_sub(1).ok_or_else(|| IoError::Schema("facet indices start at 1".into()))
}

pub fn polytope_from_json(text: &str) -> Result<SimplePolytope, IoError> {
    let f: PolytopeFile = serde_json::from_str(text)?;
    let t = f
        .vertices
        .iter()
        .map(|v| Ok([one_based(v[0])?, one_based(v[1])?, one_based(v[2])?]))
        .collect::<Result<Vec<_>, IoError>>()?;
    SimplePolytope::new(f.m, t).map_err(|e| e.one_based().into())
}

pub fn polytope_to_json(p: &SimplePolytope) -> Value {
    let vertices: Vec<[usize; 3]> = p.vertices().iter().map(|v| v.map(|f| f + 1)).collect();
    serde_json::to_value(PolytopeFile { m: p.m(), vertices }).unwrap()
}

pub fn coloring_from_json(p: &SimplePolytope, text: &str) -> Result<VectorColoring, IoError> {
    let v: Value = serde_json::from_str(text)?;
    let obj = v.as_object().ok_or_else(|| IoError::Schema("colouring must be an object".into()))?;
    let r = obj.get("r").and_then(Value::as_u64).ok_or_else(|| IoError::Schema("missing integer \"r\"".into()))? as usize;
    let columns: Vec<u64> = match (obj.get("columns"), obj.get("cols")) {
        (Some(c), None) => {
            let rows: Vec<Vec<u8>> = serde_json::from_value(c.clone())?;
            rows.iter()
                .map(|bits| {
                    if bits.len() != r || bits.iter().any(|&b| b > 1) {
                        return Err(IoError::Schema(format!("each column needs {r} bits 0/1")));
                    }
                    Ok(bits.iter().fold(0u64, |acc, &b| acc << 1 | b as u64))
                })
                .collect::<Result<_, _>>()?
        }
        (None, Some(c)) => serde_json::from_value(c.clone())?,
        _ => return Err(IoError::Schema("give exactly one of \"columns\" and \"cols\"".into())),
    };
    Ok(VectorColoring::new(p, r, columns)?)
}

pub fn coloring_to_json(c: &VectorColoring) -> Value {
    let r = c.ambient();
    let columns: Vec<Vec<u8>> =
        c.columns().iter().map(|&v| (0..r).rev().map(|k| (v >> k & 1) as u8).collect()).collect();
    serde_json::json!({ "r": r, "columns": columns })
}

pub fn belt_from_json(p: &SimplePolytope, text: &str) -> Result<Belt, IoError> {
    #[derive(Deserialize)]
    struct BeltFile {
        facets: Vec<usize>,
    }
    let b: BeltFile = serde_json::from_str(text)?;
    let f = b.facets.iter().map(|&i| one_based(i)).collect::<Result<Vec<_>, _>>()?;
    Ok(Belt::new(p, &f)?)
}

pub fn belt_to_json(b: &Belt) -> Value {
    serde_json::json!({ "facets": b.facets().iter().map(|f| f + 1).collect::<Vec<_>>() })
}

fn read(path: &str) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|e| IoError::File { path: path.into(), message: e.to_string() })
}

/// A catalog name starting with `@`, or a path to a polytope file.
pub fn load_polytope(source: &str) -> Result<SimplePolytope, IoError> {
    if source.starts_with('@') {
        Ok(catalog::by_name(source)?)
    } else {
        polytope_from_json(&read(source)?)
    }
}

/// `@identity`, `@search-small-cover`, or a path to a colouring file.
pub fn load_coloring(p: &SimplePolytope, source: &str) -> Result<VectorColoring, IoError> {
    match source {
        "@identity" => Ok(VectorColoring::identity(p)),
        "@search-small-cover" => search_small_cover(p).ok_or(IoError::NoSmallCover),
        _ => coloring_from_json(p, &read(source)?),
    }
}
