//! Combinatorics of simple 3-polytopes, their belts and vector-colourings,
//! and the topology of the manifolds glued from them.

pub mod belts;
pub mod coloring;
pub mod corpus;
pub mod decomposition;
pub mod gf2;
pub mod invariants;
pub mod io;
pub mod oracle;
pub mod polytope;

pub use polytope::{FacetId, FacetTracking, Provenance, SimplePolytope, Vertex};
