mod error;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use colorfold_core::belts::enumerate_belts;
use colorfold_core::coloring::{enumerate_colorings, VectorColoring};
use colorfold_core::decomposition::{
    canonical_4belt_decomposition, canonical_4belt_decomposition_randomized, classify_polytope, prime_decompose,
    Classification, FlagKind,
};
use colorfold_core::invariants::{global_geometry, jsj_from_decomposition, prime_expression};
use colorfold_core::io::{coloring_to_json, load_coloring, load_polytope, polytope_to_json};
use colorfold_core::oracle::{self, build_complex};
use colorfold_core::polytope::catalog;
use colorfold_core::SimplePolytope;

use error::CliError;

#[derive(Parser)]
#[command(name = "colorfold", version, about = "Decompositions of manifolds over simple 3-polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Polytopes are JSON files or catalogue names such as `@cube` or
/// `@prism:5`; colourings are JSON files, `@identity` or
/// `@search-small-cover`.
#[derive(Subcommand)]
enum Command {
    /// Check that a polytope (and optionally a colouring) is well formed.
    Validate {
        polytope: String,
        #[arg(long)]
        coloring: Option<String>,
    },
    /// Combinatorial summary of a polytope.
    Info { polytope: String },
    /// All k-belts of a polytope.
    Belts {
        polytope: String,
        #[arg(long)]
        k: usize,
    },
    /// Decomposition along 3-belts, with the prime expression when a
    /// colouring is given.
    DecomposePrime {
        polytope: String,
        #[arg(long)]
        coloring: Option<String>,
        /// Write a Graphviz description of the tree to this file.
        #[arg(long)]
        dot: Option<String>,
    },
    /// Canonical decomposition along 4-belts, with the JSJ report when a
    /// colouring is given.
    DecomposeJsj {
        polytope: String,
        #[arg(long)]
        coloring: Option<String>,
        /// Make the choices at random; the result must not depend on it.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        dot: Option<String>,
    },
    /// Full report for a polytope and an orientable colouring.
    Analyze { polytope: String, coloring: String },
    /// Polytopes available by name.
    Catalog,
    /// Colourings of the given rank up to change of basis.
    EnumerateColorings {
        polytope: String,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        limit: Option<usize>,
        /// Keep orientable colourings only.
        #[arg(long)]
        orientable: bool,
        /// Report maximality of each class.
        #[arg(long)]
        maximal: bool,
    },
    /// Brute-force cell complex checks.
    Oracle {
        #[arg(long, value_enum, default_value_t = Check::All)]
        check: Check,
        /// Summarise the complex of this polytope instead (needs a colouring).
        polytope: Option<String>,
        coloring: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    All,
    Belts,
    Orientability,
    Surfaces,
    Components,
}

fn with_schema(mut v: Value) -> Value {
    v["schema"] = json!(1);
    v
}

fn write_file(path: &str, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Write { path: path.into(), message: e.to_string() })
}

fn require_orientable(c: &VectorColoring) -> Result<(), CliError> {
    if c.is_orientable() {
        return Ok(());
    }
    let cover = c.orientation_double_cover()?;
    Err(CliError::NotOrientable {
        hint: json!({
            "message": "the orientation double cover is orientable and has one more dimension",
            "double_cover": coloring_to_json(&cover.coloring),
        }),
    })
}

fn validate(polytope: &str, coloring: Option<&str>) -> Result<Value, CliError> {
    let p = load_polytope(polytope)?;
    let mut v = json!({ "valid": true, "m": p.m(), "vertices": p.num_vertices(), "edges": p.num_edges() });
    if let Some(src) = coloring {
        v["coloring"] = report::coloring(&load_coloring(&p, src)?);
    }
    Ok(v)
}

fn info(polytope: &str) -> Result<Value, CliError> {
    let p = load_polytope(polytope)?;
    let quadrangles = (0..p.m()).filter(|&f| p.is_quadrangle(f)).count();
    let mut v = json!({
        "polytope": polytope_to_json(&p),
        "m": p.m(),
        "vertices": p.num_vertices(),
        "edges": p.num_edges(),
        "facet_sizes": p.facet_sizes(),
        "quadrangles": quadrangles,
        "classification": report::classification(&classify_polytope(&p)),
        "belt_counts": { "3": enumerate_belts(&p, 3).len(), "4": enumerate_belts(&p, 4).len() },
    });
    if let Ok(g) = global_geometry(&p) {
        v["global_geometry"] = serde_json::to_value(g).unwrap();
    }
    Ok(v)
}

fn belts(polytope: &str, k: usize) -> Result<Value, CliError> {
    let p = load_polytope(polytope)?;
    if k < 3 {
        return Err(colorfold_core::belts::BeltError::TooShort(k).into());
    }
    let all: Vec<Value> = enumerate_belts(&p, k).iter().map(|b| report::belt_entry(&p, b)).collect();
    Ok(json!({ "k": k, "count": all.len(), "belts": all }))
}

fn decompose_prime(polytope: &str, coloring: Option<&str>, dot: Option<&str>) -> Result<Value, CliError> {
    let p = load_polytope(polytope)?;
    let tree = prime_decompose(&p)?;
    if let Some(path) = dot {
        write_file(path, &report::prime_dot(&tree))?;
    }
    let mut v = json!({ "tree": report::prime_tree(&tree) });
    if let Some(src) = coloring {
        let c = load_coloring(&p, src)?;
        require_orientable(&c)?;
        v["prime_expression"] = report::prime_report(&prime_expression(&p, &c)?);
    }
    Ok(v)
}

fn decompose_jsj(polytope: &str, coloring: Option<&str>, seed: Option<u64>, dot: Option<&str>) -> Result<Value, CliError> {
    let p = load_polytope(polytope)?;
    let d = match seed {
        Some(s) => canonical_4belt_decomposition_randomized(&p, &mut ChaCha8Rng::seed_from_u64(s))?,
        None => canonical_4belt_decomposition(&p)?,
    };
    if let Some(path) = dot {
        write_file(path, &report::canonical_dot(&d))?;
    }
    let mut v = json!({ "decomposition": report::canonical(&d) });
    if let Some(src) = coloring {
        let c = load_coloring(&p, src)?;
        require_orientable(&c)?;
        v["jsj"] = report::jsj(&jsj_from_decomposition(&p, &c, &d)?);
    }
    Ok(v)
}

/// JSJ report of a flag polytope other than the cube, or the reason it has
/// none.
fn jsj_or_reason(p: &SimplePolytope, c: &VectorColoring) -> Result<Value, CliError> {
    match classify_polytope(p) {
        Classification::Flag { kind: FlagKind::Cube } => Ok(json!({ "skipped": "Euclidean: no decomposing tori" })),
        Classification::Flag { .. } => {
            let d = canonical_4belt_decomposition(p)?;
            Ok(report::jsj(&jsj_from_decomposition(p, c, &d)?))
        }
        _ => Ok(json!({ "skipped": "not flag" })),
    }
}

fn analyze(polytope: &str, coloring: &str) -> Result<Value, CliError> {
    let p = load_polytope(polytope)?;
    let c = load_coloring(&p, coloring)?;
    require_orientable(&c)?;
    let prime = prime_expression(&p, &c)?;
    let mut v = json!({
        "orientable": true,
        "rank": c.rank(),
        "prime_expression": report::prime_report(&prime),
    });
    if prime.tree.belts.is_empty() {
        let j = jsj_or_reason(&p, &c)?;
        if let Some(pieces) = j["pieces"].as_array() {
            v["closed"] = json!(pieces.len() == 1 && pieces[0]["closed"] == json!(true));
        }
        v["jsj"] = j;
    } else {
        // the manifold is a connected sum; report the aspherical summands
        let mut leaves = Vec::new();
        for (i, l) in prime.tree.leaves.iter().enumerate().filter(|(_, l)| !l.simplex) {
            let cols = l.parents.iter().map(|&f| c.column(f)).collect();
            let entry = match VectorColoring::new(&l.polytope, c.ambient(), cols) {
                Ok(lc) => jsj_or_reason(&l.polytope, &lc)?,
                Err(e) => json!({ "skipped": e.to_string() }),
            };
            leaves.push(json!({ "leaf": i, "copies": (1u128 << (c.rank() - prime.leaf_ranks[i])).to_string(), "jsj": entry }));
        }
        v["jsj"] = json!({ "summands": leaves });
    }
    if let Ok(g) = global_geometry(&p) {
        v["global_geometry"] = serde_json::to_value(g).unwrap();
    }
    Ok(v)
}

fn catalog_list() -> Value {
    let entries: Vec<Value> = catalog::NAMES
        .iter()
        .map(|&n| match n {
            "prism:K" => json!({ "name": "@prism:K", "m": "K+2", "note": "K >= 3" }),
            _ => json!({ "name": format!("@{n}"), "m": catalog::by_name(n).unwrap().m() }),
        })
        .collect();
    json!({ "polytopes": entries, "colorings": ["@identity", "@search-small-cover"] })
}

fn enumerate(polytope: &str, rank: usize, limit: Option<usize>, orientable: bool, maximal: bool) -> Result<Value, CliError> {
    let p = load_polytope(polytope)?;
    if rank < 3 {
        return Err(CliError::RankTooSmall(rank));
    }
    let e = enumerate_colorings(&p, rank, limit)?;
    let classes: Vec<Value> = e
        .classes
        .iter()
        .filter(|c| !orientable || c.is_orientable())
        .map(|c| {
            let mut v = report::coloring(c);
            if maximal {
                v["maximal"] = json!(c.is_maximal(&p));
            }
            v
        })
        .collect();
    Ok(json!({ "rank": rank, "count": classes.len(), "truncated": e.truncated, "classes": classes }))
}

fn run_oracle(check: Check, polytope: Option<&str>, coloring: Option<&str>) -> Result<Value, CliError> {
    if let Some(src) = polytope {
        let p = load_polytope(src)?;
        let c = load_coloring(&p, coloring.unwrap_or("@identity"))?;
        let s = build_complex(&p, &c)?.summary();
        return Ok(json!({ "summary": s }));
    }
    let results = match check {
        Check::All => oracle::check_all(),
        Check::Belts => vec![oracle::check_belts()],
        Check::Orientability => vec![oracle::check_orientability()],
        Check::Surfaces => vec![oracle::check_surfaces()],
        Check::Components => vec![oracle::check_components()],
    };
    let failed = results.iter().filter(|r| !r.passed).count();
    let v = json!({ "passed": failed == 0, "checks": results });
    if failed > 0 {
        return Err(CliError::ChecksFailed { failed, report: v });
    }
    Ok(v)
}

fn run(cli: Cli) -> Result<Value, CliError> {
    match cli.command {
        Command::Validate { polytope, coloring } => validate(&polytope, coloring.as_deref()),
        Command::Info { polytope } => info(&polytope),
        Command::Belts { polytope, k } => belts(&polytope, k),
        Command::DecomposePrime { polytope, coloring, dot } => decompose_prime(&polytope, coloring.as_deref(), dot.as_deref()),
        Command::DecomposeJsj { polytope, coloring, seed, dot } => {
            decompose_jsj(&polytope, coloring.as_deref(), seed, dot.as_deref())
        }
        Command::Analyze { polytope, coloring } => analyze(&polytope, &coloring),
        Command::Catalog => Ok(catalog_list()),
        Command::EnumerateColorings { polytope, rank, limit, orientable, maximal } => {
            enumerate(&polytope, rank, limit, orientable, maximal)
        }
        Command::Oracle { check, polytope, coloring } => run_oracle(check, polytope.as_deref(), coloring.as_deref()),
    }
}

fn emit(v: &Value) {
    // a closed pipe is not worth a panic
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).unwrap());
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(v) => {
            emit(&with_schema(v));
            ExitCode::SUCCESS
        }
        Err(e) => {
            emit(&e.to_json());
            ExitCode::from(1)
        }
    }
}
