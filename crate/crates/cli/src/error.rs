use serde_json::{json, Value};
use thiserror::Error;

use colorfold_core::belts::BeltError;
use colorfold_core::coloring::ColoringError;
use colorfold_core::decomposition::DecompositionError;
use colorfold_core::invariants::InvariantError;
use colorfold_core::io::IoError;
use colorfold_core::oracle::OracleError;

/// Anything that makes a command exit with status 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Belt(#[from] BeltError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("cannot write {path}: {message}")]
    Write { path: String, message: String },
    #[error("{failed} self-check(s) failed")]
    ChecksFailed { failed: usize, report: Value },
    #[error("the colouring is not orientable")]
    NotOrientable { hint: Value },
    #[error("rank {0} is too small; colourings need rank at least 3")]
    RankTooSmall(usize),
}

fn variant<E: std::fmt::Debug>(e: &E) -> String {
    let d = format!("{e:?}");
    d.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

impl CliError {
    /// The innermost variant name, e.g. `UnmatchedEdge`.
    pub fn kind(&self) -> String {
        match self {
            CliError::Io(e) => e.kind(),
            CliError::Belt(BeltError::Polytope(e)) => variant(e),
            CliError::Belt(e) => variant(e),
            CliError::Coloring(e) => variant(e),
            CliError::Decomposition(e) => variant(e),
            CliError::Invariant(e) => variant(e),
            CliError::Oracle(e) => variant(e),
            other => variant(other),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut error = json!({ "kind": self.kind(), "message": self.to_string() });
        match self {
            CliError::NotOrientable { hint } => error["hint"] = hint.clone(),
            CliError::ChecksFailed { report, .. } => error["report"] = report.clone(),
            _ => {}
        }
        json!({ "schema": 1, "error": error })
    }
}
