//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use colorfold_core::belts::Belt;
use colorfold_core::coloring::{enumerate_colorings, for_each_class, search_coloring, search_small_cover, VectorColoring};
use colorfold_core::corpus::{random_facet_sum, random_vertex_sum};
use colorfold_core::decomposition::{
    canonical_4belt_decomposition, canonical_4belt_decomposition_randomized, prime_decompose, PieceKind, PrimeTree,
};
use colorfold_core::gf2;
use colorfold_core::invariants::{
    base_case_manifold, belt_surface, jsj_report, prime_expression, prime_expression_by_splitting, FreeKind,
    ManifoldLabel, PieceGeometry, PrimeExpression,
};
use colorfold_core::oracle::{build_complex, surface_complex};
use colorfold_core::polytope::catalog::*;
use colorfold_core::polytope::{canonical_code, connected_sum_facets, dihedral_identification, SimplePolytope};

const SURFACE_BUDGET: Duration = Duration::from_secs(5);
const ORIENTABILITY_BUDGET: Duration = Duration::from_secs(60);
const PRIME_BUDGET: Duration = Duration::from_secs(60);
const CANONICAL_BUDGET: Duration = Duration::from_secs(120);
const MAXIMAL_BUDGET: Duration = Duration::from_secs(600);
const RANDOM_SURFACES: usize = 30;
const RANDOM_COLORINGS: usize = 200;
const CORPUS: usize = 50;
const RANDOM_RUNS: usize = 20;
const ORACLE_RANK_CAP: usize = 12;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'a str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t <= budget, || format!("took {t:?}, budget {budget:?}"))?;
    Ok(t)
}

/// Random columns for a k-gon of span dimension `rb`, consecutive ones
/// distinct; odd-weight columns only when `odd`.
fn random_polygon<R: Rng>(rng: &mut R, k: usize, rb: usize, odd: bool) -> Vec<u64> {
    loop {
        let pool: Vec<u64> = (1..1u64 << rb).filter(|v| !odd || v.count_ones() % 2 == 1).collect();
        let cols: Vec<u64> = (0..k).map(|_| *pool.choose(rng).unwrap()).collect();
        let ok = (0..k).all(|t| cols[t] != cols[(t + 1) % k]);
        if ok && gf2::rank(cols.iter().copied()) == rb {
            return cols;
        }
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for k in 4..=8usize {
        let cols: Vec<u64> = (0..k).map(gf2::unit).collect();
        let s = surface_complex(&cols).map_err(|e| e.to_string())?;
        let chi = (k as i64) * (1 << (k - 2)) - (k as i64) * (1 << (k - 1)) + (1 << k);
        let genus = (k as i64 - 4) * (1 << (k - 3)) + 1;
        ensure(s.euler_characteristic == chi && s.orientable && s.genus == genus, || {
            format!("identity {k}-gon: {s:?}, expected chi {chi} genus {genus}")
        })?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut kinds = [0usize; 2];
    for i in 0..RANDOM_SURFACES {
        let k = rng.gen_range(4..=8);
        let rb = [2, 3, 4][i % 3];
        let cols = random_polygon(&mut rng, k, rb, i % 2 == 0 && !(rb == 2 && k % 2 == 1));
        let s = surface_complex(&cols).map_err(|e| e.to_string())?;
        let expected = if s.orientable {
            1 + ((k as i64 - 4) << rb) / 8
        } else {
            2 + ((k as i64 - 4) << rb) / 4
        };
        ensure(s.closed && s.components == 1 && s.genus == expected, || {
            format!("polygon {cols:?}: oracle {s:?}, closed form {expected}")
        })?;
        // the same colouring on the side belt of a prism
        let p = prism(k).unwrap();
        let top = gf2::unit(rb);
        let mut full = vec![top, top];
        full.extend(&cols);
        let c = VectorColoring::new(&p, rb + 1, full).map_err(|e| e.to_string())?;
        let sides: Vec<usize> = (0..k).map(prism_side).collect();
        let belt = Belt::new(&p, &sides).unwrap();
        let bs = belt_surface(&c, &belt);
        let comps = build_complex(&p, &c).unwrap().count_belt_components(belt.facets());
        ensure(
            bs.orientable == s.orientable && bs.genus as i64 == s.genus && bs.components == 2 && comps == 2,
            || format!("belt surface {bs:?} vs oracle {s:?}, {comps} components"),
        )?;
        kinds[s.orientable as usize] += 1;
    }
    let t = within(start, SURFACE_BUDGET)?;
    Ok(format!(
        "k=4..8 identity + {RANDOM_SURFACES} random ({} orientable, {} not) in {t:.2?}",
        kinds[1], kinds[0]
    ))
}

/// Random colouring of the given rank by randomised backtracking.
fn random_coloring<R: Rng>(rng: &mut R, p: &SimplePolytope, rank: usize) -> Option<VectorColoring> {
    fn go<R: Rng>(rng: &mut R, p: &SimplePolytope, order: &[usize], i: usize, r: usize, cols: &mut Vec<u64>, budget: &mut usize) -> bool {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        if i == order.len() {
            return gf2::rank(cols.iter().copied()) == r;
        }
        let f = order[i];
        let mut cand: Vec<u64> = (1..1u64 << r).collect();
        cand.shuffle(rng);
        for v in cand {
            cols[f] = v;
            let ok = p.vertices().iter().filter(|t| t.contains(&f)).all(|t| {
                let c = t.map(|g| cols[g]);
                c.contains(&0) || gf2::rank(c) == 3
            }) && p.neighbours(f).iter().all(|&g| cols[g] != v);
            if ok && go(rng, p, order, i + 1, r, cols, budget) {
                return true;
            }
        }
        cols[f] = 0;
        false
    }
    let mut order: Vec<usize> = vec![0];
    let mut seen = vec![false; p.m()];
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
    let mut cols = vec![0; p.m()];
    let mut budget = 200_000;
    go(rng, p, &order, 0, rank, &mut cols, &mut budget).then(|| VectorColoring::new(p, rank, cols).unwrap())
}

/// Colourings of criterion 2, shared with criterion 3.
fn orientability_corpus() -> Vec<(SimplePolytope, VectorColoring)> {
    let mut out = Vec::new();
    for p in [simplex(), prism(3).unwrap(), cube(), prism(5).unwrap()] {
        for rank in 3..=p.m() {
            for c in enumerate_colorings(&p, rank, None).unwrap().classes {
                out.push((p.clone(), c));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let pool = [prism(6).unwrap(), prism(7).unwrap(), associahedron3(), dodecahedron()];
    let mut added = 0;
    while added < RANDOM_COLORINGS {
        let p = if rng.gen_bool(0.3) { random_vertex_sum(&mut rng, 2).0 } else { pool.choose(&mut rng).unwrap().clone() };
        let rank = rng.gen_range(3..=p.m().min(8));
        if let Some(c) = random_coloring(&mut rng, &p, rank) {
            out.push((p, c));
            added += 1;
        }
    }
    out
}

fn criterion_2(corpus: &[(SimplePolytope, VectorColoring)], start: Instant) -> Outcome {
    let mut disagreements = 0;
    let mut orientable = 0;
    for (p, c) in corpus {
        let a = c.is_orientable();
        let b = c.orientation_functional().is_some();
        let cx = build_complex(p, c).map_err(|e| e.to_string())?;
        let o = cx.orientable_by_propagation();
        if !(a == b && b == o) || !cx.is_closed_manifold() || !cx.is_connected() || cx.euler_characteristic() != 0 {
            disagreements += 1;
        }
        orientable += a as usize;
    }
    let t = within(start, ORIENTABILITY_BUDGET)?;
    ensure(disagreements == 0, || format!("{disagreements} disagreements"))?;
    Ok(format!("{} colourings ({orientable} orientable), 0 disagreements, {t:.2?}", corpus.len()))
}

fn criterion_3(corpus: &[(SimplePolytope, VectorColoring)]) -> Outcome {
    let mut n = 0;
    for (p, c) in corpus.iter().filter(|(_, c)| !c.is_orientable()) {
        let dc = c.orientation_double_cover().map_err(|e| e.to_string())?;
        let cover = VectorColoring::new(p, dc.coloring.ambient(), dc.coloring.columns().to_vec())
            .map_err(|e| format!("cover not certified: {e}"))?;
        ensure(cover.is_orientable() && cover.orientation_functional().is_some(), || "cover not orientable".into())?;
        ensure(build_complex(p, &cover).unwrap().orientable_by_propagation(), || "oracle: cover not orientable".into())?;
        ensure(cover.rank() == c.rank() + 1, || "rank did not grow by one".into())?;
        ensure((0..p.m()).all(|f| dc.projection.apply(cover.column(f)) == c.column(f)), || "projection mismatch".into())?;
        n += 1;
    }
    Ok(format!("{n} non-orientable colourings covered"))
}

fn criterion_4() -> Outcome {
    let s = simplex();
    let mut labels = Vec::new();
    for rank in [3, 4] {
        let classes = enumerate_colorings(&s, rank, None).unwrap().classes;
        ensure(classes.len() == 1, || format!("simplex rank {rank}: {} classes", classes.len()))?;
        labels.push(base_case_manifold(&s, &classes[0]).map_err(|e| e.to_string())?);
    }
    ensure(labels == [ManifoldLabel::RP3, ManifoldLabel::S3], || format!("simplex labels {labels:?}"))?;

    let p = prism(3).unwrap();
    let tree = prime_decompose(&p).unwrap();
    let (t, b) = (0, 1);
    let sides = [2, 3, 4];
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for rank in 3..=5 {
        for c in enumerate_colorings(&p, rank, None).unwrap().classes.into_iter().filter(|c| c.is_orientable()) {
            let label = base_case_manifold(&p, &c).map_err(|e| e.to_string())?;
            let col = |f: usize| c.column(f);
            let side_sum = sides.iter().fold(0, |a, &f| a ^ col(f));
            let (case, expect) = match rank {
                5 => ("rank 5", ManifoldLabel::S2xS1),
                3 => ("rank 3", ManifoldLabel::RP3SumRP3),
                _ => {
                    let equal = col(t) == col(b);
                    let base_is_sides = col(t) == side_sum || col(b) == side_sum;
                    let mixed = sides.iter().enumerate().any(|(x, &i)| {
                        sides[x + 1..].iter().any(|&j| col(t) == col(b) ^ col(i) ^ col(j))
                    });
                    match (equal, base_is_sides, mixed) {
                        (true, false, false) => ("bases equal", ManifoldLabel::S2xS1),
                        (false, true, false) => ("base is sum of sides", ManifoldLabel::RP3SumRP3),
                        (false, false, true) => ("base is other base plus two sides", ManifoldLabel::S2xS1),
                        other => return Err(format!("colouring {c:?} fits no single case {other:?}")),
                    }
                }
            };
            ensure(label == expect, || format!("{case}: got {label:?}"))?;
            let split = prime_expression_by_splitting(&tree, &c).map_err(|e| e.to_string())?;
            ensure(split == PrimeExpression::from_label(label), || format!("{case}: formula gives {split}"))?;
            *seen.entry(case).or_default() += 1;
        }
    }
    ensure(seen.len() == 5, || format!("cases seen: {seen:?}"))?;
    Ok(format!("simplex [RP3, S3]; prism(3) classes per case {seen:?}"))
}

/// Handles for the identity colouring by repeated use of the two-summand
/// product formula.
fn identity_handles(tree: &PrimeTree, leaves: &[usize], belts: &[usize], m: usize) -> u128 {
    let count = |ls: &[usize]| -> usize {
        let mut f: Vec<usize> = ls.iter().flat_map(|&l| tree.leaves[l].parents.clone()).collect();
        f.sort();
        f.dedup();
        f.len()
    };
    let Some((&b, rest)) = belts.split_first() else { return 0 };
    let mut side = vec![tree.joins[b].0];
    let mut i = 0;
    while i < side.len() {
        for &e in rest {
            let (u, v) = tree.joins[e];
            if u == side[i] && !side.contains(&v) {
                side.push(v);
            }
            if v == side[i] && !side.contains(&u) {
                side.push(u);
            }
        }
        i += 1;
    }
    let other: Vec<usize> = leaves.iter().copied().filter(|l| !side.contains(l)).collect();
    let (m1, m2) = (count(&side), count(&other));
    let inside = |ls: &[usize]| -> Vec<usize> {
        rest.iter().copied().filter(|&e| ls.contains(&tree.joins[e].0) && ls.contains(&tree.joins[e].1)).collect()
    };
    let (a, c) = (1u128 << (m - m1), 1u128 << (m - m2));
    (a - 1) * (c - 1) + a * identity_handles(tree, &side, &inside(&side), m1) + c * identity_handles(tree, &other, &inside(&other), m2)
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut leaves_total = 0;
    for n in 0..CORPUS {
        let (p, used) = random_vertex_sum(&mut rng, 2 + n % 3);
        let tree = prime_decompose(&p).map_err(|e| e.to_string())?;
        let mut got: Vec<_> = tree.leaves.iter().map(|l| canonical_code(&l.polytope)).collect();
        let mut want: Vec<_> = used.iter().map(canonical_code).collect();
        got.sort();
        want.sort();
        ensure(got == want, || format!("sum {n}: leaves differ from summands"))?;
        leaves_total += got.len();

        let m = p.m();
        let id = VectorColoring::identity(&p);
        let rep = prime_expression(&p, &id).map_err(|e| e.to_string())?;
        let split = prime_expression_by_splitting(&tree, &id).map_err(|e| e.to_string())?;
        ensure(split == rep.expression, || format!("sum {n}: splitting {split} vs closed {}", rep.expression))?;
        let all: Vec<usize> = (0..tree.leaves.len()).collect();
        let belts: Vec<usize> = (0..tree.belts.len()).collect();
        let h = identity_handles(&tree, &all, &belts, m);
        ensure(h == rep.expression.handles, || format!("sum {n}: product formula {h} vs {}", rep.expression.handles))?;
        for (i, l) in tree.leaves.iter().enumerate() {
            ensure(rep.leaf_ranks[i] == l.polytope.m(), || format!("sum {n}: identity leaf rank"))?;
        }

        let sc = search_small_cover(&p).ok_or_else(|| format!("sum {n}: no small cover found"))?;
        let rep3 = prime_expression(&p, &sc).map_err(|e| e.to_string())?;
        ensure(rep3.expression.handles == 0, || format!("sum {n}: small cover has S2xS1 summands"))?;
        let copies: u128 = rep3.expression.summands.iter().map(|s| s.exponent).sum();
        ensure(copies == tree.leaves.len() as u128, || format!("sum {n}: small cover gives {}", rep3.expression))?;
        ensure(rep3.leaf_ranks.iter().all(|&r| r == 3), || format!("sum {n}: leaf ranks"))?;
    }
    let t = within(start, PRIME_BUDGET)?;
    Ok(format!("{CORPUS} sums, {leaves_total} leaves matched, {t:.2?}"))
}

fn facet_corpus() -> Vec<SimplePolytope> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    (0..CORPUS).map(|n| random_facet_sum(&mut rng, 2 + n % 3)).collect()
}

fn criterion_6(corpus: &[SimplePolytope]) -> Outcome {
    let start = Instant::now();
    let mut belts_total = 0;
    for (n, p) in corpus.iter().enumerate() {
        let d = canonical_4belt_decomposition(p).map_err(|e| format!("polytope {n}: {e}"))?;
        for run in 0..RANDOM_RUNS {
            let mut rng = ChaCha8Rng::seed_from_u64((n * 1000 + run) as u64);
            let e = canonical_4belt_decomposition_randomized(p, &mut rng).map_err(|e| e.to_string())?;
            ensure(e.belts == d.belts, || format!("polytope {n}: run {run} found a different family"))?;
        }
        for b in &d.belts {
            ensure(!b.facets().iter().any(|&f| p.is_quadrangle(f)), || format!("polytope {n}: belt through a quadrangle"))?;
        }
        ensure(d.twists.iter().all(|t| t.twisted), || format!("polytope {n}: untwisted prisms left apart"))?;
        belts_total += d.belts.len();
    }
    let t = within(start, CANONICAL_BUDGET)?;
    Ok(format!("{CORPUS} polytopes x {RANDOM_RUNS} runs agree, {belts_total} canonical belts, {t:.2?}"))
}

fn criterion_7(corpus: &[SimplePolytope]) -> Outcome {
    let (mut reports, mut oracle_checks) = (0, 0);
    for (n, p) in corpus.iter().enumerate() {
        let mut colourings = vec![VectorColoring::identity(p)];
        for rank in [3, 4] {
            if let Some(c) = search_coloring(p, rank, true).map_err(|e| e.to_string())? {
                colourings.push(c);
            }
        }
        for c in colourings {
            let r = c.rank();
            let rep = jsj_report(p, &c).map_err(|e| format!("polytope {n}: {e}"))?;
            reports += 1;
            ensure(rep.total_boundary() == rep.expected_boundary(), || {
                format!("polytope {n} rank {r}: boundary {} vs {}", rep.total_boundary(), rep.expected_boundary())
            })?;
            for f in &rep.free_quadrangles {
                let around = 1u128 << (r - f.belt_span_dim);
                let ok = match f.kind {
                    FreeKind::Tori => around == 2 * f.surfaces,
                    FreeKind::KleinBottles => around == f.surfaces,
                };
                ensure(ok, || format!("polytope {n}: free quadrangle identity fails for {f:?}"))?;
            }
            if r <= ORACLE_RANK_CAP {
                let cx = build_complex(p, &c).map_err(|e| e.to_string())?;
                for b in &rep.belts {
                    let k = cx.count_belt_components(b.belt.facets()) as u128;
                    ensure(k == b.tori, || format!("polytope {n}: belt components {k} vs {}", b.tori))?;
                    oracle_checks += 1;
                }
                for f in &rep.free_quadrangles {
                    let k = cx.count_belt_components(f.belt.facets()) as u128;
                    let j = cx.count_facet_components(f.facet) as u128;
                    ensure(k == 1 << (r - f.belt_span_dim) && j == f.surfaces, || {
                        format!("polytope {n}: free quadrangle components {k}, {j} vs {f:?}")
                    })?;
                    oracle_checks += 1;
                }
            }
        }
    }
    Ok(format!("{reports} reports, {oracle_checks} oracle component checks"))
}

fn criterion_8() -> Outcome {
    let p5 = prism(5).unwrap();
    let q = prism_side(0);
    let (p, _) = connected_sum_facets(&p5, q, &p5, q, &dihedral_identification(&p5, q, &p5, q, 1, false)).unwrap();
    ensure(p.m() == 8, || format!("m = {}", p.m()))?;
    let d = canonical_4belt_decomposition(&p).map_err(|e| e.to_string())?;
    ensure(d.belts.len() == 1, || format!("{} canonical belts", d.belts.len()))?;
    ensure(d.pieces.iter().all(|x| matches!(x.kind, PieceKind::Prism { k: 5, .. })), || "pieces are not 5-prisms".into())?;
    let rep = jsj_report(&p, &VectorColoring::identity(&p)).map_err(|e| e.to_string())?;
    ensure(rep.tori1 == 16, || format!("{} tori", rep.tori1))?;
    for x in &rep.pieces {
        ensure(x.geometry == PieceGeometry::H2xR && x.multiplicity == 4 && x.boundary_per_copy == 4, || format!("{x:?}"))?;
    }
    let total = rep.total_boundary();
    ensure(total / 2 == 16 && total == rep.expected_boundary(), || format!("boundary {total}"))?;
    Ok("1 belt, 16 tori, 2 x Prism(5) with 4 copies and 4 boundary tori each".into())
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let a = associahedron3();
    let mut found = None;
    let mut scanned = 0;
    for_each_class(&a, 4, &mut |cols| {
        scanned += 1;
        let c = VectorColoring::new(&a, 4, cols.to_vec()).unwrap();
        if c.is_orientable() && c.is_maximal(&a) {
            found = Some(c);
            return false;
        }
        true
    })
    .map_err(|e| e.to_string())?;
    let c = found.ok_or("no orientable maximal rank-4 colouring")?;
    let t = within(start, MAXIMAL_BUDGET)?;
    let rank3 = enumerate_colorings(&a, 3, None).unwrap().classes;
    ensure(rank3.iter().all(|c| c.is_maximal(&a)), || "a rank-3 colouring is not maximal".into())?;
    Ok(format!("found {:?} after {scanned} classes in {t:.2?}; {} rank-3 classes maximal", c.columns(), rank3.len()))
}

fn main() {
    // `cargo test` passes harness flags; a name filter other than ours skips the suite
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !args.is_empty() && !args.iter().any(|a| "acceptance".contains(a.as_str())) {
        return;
    }
    let t2 = Instant::now();
    let corpus = orientability_corpus();
    let facets = facet_corpus();
    let criteria: Vec<Criterion> = vec![
        ("1 surface closed forms", Box::new(criterion_1)),
        ("2 orientability agreement", Box::new(|| criterion_2(&corpus, t2))),
        ("3 orientation double cover", Box::new(|| criterion_3(&corpus))),
        ("4 base-case table", Box::new(criterion_4)),
        ("5 prime decomposition round trip", Box::new(criterion_5)),
        ("6 canonical 4-belt uniqueness", Box::new(|| criterion_6(&facets))),
        ("7 JSJ counting identities", Box::new(|| criterion_7(&facets))),
        ("8 pinned twisted prism sum", Box::new(criterion_8)),
        ("9 maximal colouring search", Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why})");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
