//! Exit criteria. Prints one PASS or FAIL line per criterion and exits non-zero if any fails.
//! Pass criterion numbers as arguments to run a subset. Setting `POLYFORGE_LONG=1` adds the
//! W(3,5) classification to criterion 8.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polyforge::constructions::{
    achievable_sizes, all_four_spaces, planar_one_good, random_four_space, verify_tgood, GoodStructure, HexCaseReport,
    HexagonContext, PlanarAnchor, PlanarKind,
};
use polyforge::permgroup::{collineation_generators, w3_duality, OrbitMultiset, PermGroup, StabilizerMethod};
use polyforge::polygon::{build_hexagon, build_pg2, build_w3, IncidencePolygon};
use polyforge::search::{
    brute_force_tgood, classify_solutions, enumerate_one_good, enumerate_with_group, lift_structures, merge_dual_pairs,
    CheckpointedSearch, SearchOptions, SolutionClass,
};
use polyforge::spectral::{cage_bounds, moore_bound, second_eigenvalue, subgraph_ratio_bounds, tgood_upper_bound};

type Check = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if let false = $cond {
            return Err(format!($($msg)+));
        }
    };
}

/// (subgraph size, stabilizer order, orbits on subgraph, orbits on structure, from a lift)
type Row = (usize, u128, &'static str, &'static str, bool);

const W33_TABLE: [Row; 13] = [
    (36, 24, "{2,4,6,12^2}", "{1,2^3,3,4,6,12^2}", false),
    (40, 12, "{2^2,6^4,12}", "{1^5,2,3^3,6^4}", false),
    (40, 240, "{20^2}", "{10^2,20}", false),
    (42, 12, "{1,2,3,6^2,12^2}", "{1^2,3^4,6^4}", false),
    (42, 36, "{3,9,12,18}", "{1^3,2,3,6^2,9^2}", true),
    (48, 36, "{6^2,18^2}", "{1^4,2^2,3^2,9^2}", true),
    (48, 36, "{6^2,18^2}", "{1,2^2,6^3,9}", false),
    (48, 144, "{24^2}", "{1,3,4^2,8,12}", true),
    (54, 36, "{3,6,9,18^2}", "{1^3,2,3^3,6^2}", false),
    (54, 36, "{3,6,9,18^2}", "{1^3,2,3,9^2}", false),
    (54, 324, "{27^2}", "{1^2,3^2,9^2}", true),
    (56, 48, "{4,12,16,24}", "{2,4^2,6,8}", false),
    (56, 48, "{4,12,16,24}", "{1,3,4,8^2}", false),
];

const W34_TABLE: [Row; 15] = [
    (100, 240, "{10,20,30,40}", "{5,10,15,20^2}", false),
    (100, 400, "{50^2}", "{10^2,25^2}", false),
    (104, 96, "{4,12,16,24,48}", "{1^3,3,4^2,12,16,24}", true),
    (108, 144, "{18^2,36^2}", "{4^2,6^2,9^2,12^2}", false),
    (112, 192, "{8,24,32,48}", "{1,2,3,6^2,16,24}", true),
    (112, 192, "{8,24,32,48}", "{1^2,2^2,4,8^2,16^2}", true),
    (120, 96, "{4,8,12,16,32,48}", "{1^3,3,4^5,8,16}", false),
    (120, 120, "{30^2,60}", "{2,3,5,10,15^2}", false),
    (120, 288, "{12^2,48^2}", "{1^4,3^2,4^2,16^2}", true),
    (120, 1440, "{60^2}", "{1,4,5^2,15,20}", true),
    (128, 192, "{16,48,64}", "{1^2,4^2,16^2}", false),
    (128, 288, "{4,12,16,48^2}", "{1^3,3,4^3,12^2}", false),
    (128, 384, "{16,48,64}", "{1,2,3,8,12,16}", false),
    (128, 4608, "{64^2}", "{1^2,4^2,16^2}", true),
    (136, 136, "{68^2}", "{17^2}", false),
];

const W35_TABLE: [Row; 11] = [
    (230, 200, "{5,10,25,40,50,100}", "{1^3,2^2,5,10^2,25^2}", true),
    (240, 100, "{5^4,20,25^4,100}", "{1^3,4,5^8,25}", false),
    (240, 200, "{10^2,20,50^2,100}", "{1,2,4,10^4,25}", false),
    (240, 400, "{20^2,100^2}", "{1,2,4,10^2,20,25}", false),
    (240, 400, "{20^2,100^2}", "{1^4,4^2,5^2,25^2}", true),
    (240, 2400, "{120^2}", "{1,5,6^2,24,30}", true),
    (250, 200, "{5,10^2,25,50^2,100}", "{1^3,2^2,5,25^2}", false),
    (250, 200, "{5,10^2,25,50^2,100}", "{1^3,4,5^3,10^2,20}", false),
    (250, 400, "{5,20,25,100^2}", "{1^3,4,5^3,20^2}", false),
    (250, 10000, "{125^2}", "{1^2,5^2,25^2}", true),
    (252, 96, "{6^2,24^2,96^2}", "{1^2,4,6,24^2}", false),
];

/// The rows for W(3,7) that come from lifts.
const W37_LIFT_ROWS: [Row; 4] = [
    (658, 588, "{7,14^2,49,84,98^2,294}", "{1^3,2^3,7,14^2,49^2}", true),
    (672, 1764, "{42^2,294^2}", "{1^4,6^2,7^2,49^2}", true),
    (672, 14112, "{336^2}", "{1,7,8^2,48,56}", true),
    (686, 86436, "{343^2}", "{1^2,7^2,49^2}", true),
];

type ParsedRow = (usize, u128, OrbitMultiset, OrbitMultiset, bool);
type RowKey = (char, i32, Option<bool>);

fn row_of(c: &SolutionClass) -> ParsedRow {
    (c.subgraph_size, c.stabilizer_order, c.subgraph_orbits.clone(), c.structure_orbits.clone(), c.from_lift)
}

fn expected_rows(rows: &[Row]) -> Vec<ParsedRow> {
    let mut v: Vec<_> = rows
        .iter()
        .map(|&(n, s, a, b, l)| (n, s, OrbitMultiset::parse(a).expect(a), OrbitMultiset::parse(b).expect(b), l))
        .collect();
    v.sort();
    v
}

fn compare_rows(classes: &[SolutionClass], table: &[Row]) -> Result<(), String> {
    let mut got: Vec<_> = classes.iter().map(row_of).collect();
    got.sort();
    let want = expected_rows(table);
    ensure!(got.len() == want.len(), "{} classes, expected {}", got.len(), want.len());
    for (g, w) in got.iter().zip(&want) {
        ensure!(g == w, "row {g:?} where {w:?} was expected");
    }
    Ok(())
}

/// Checks the size bound and the vertex ratio window for one structure.
fn bound_violation(polygon: &IncidencePolygon, lambda: f64, g: &GoodStructure) -> Option<String> {
    let q = polygon.q() as u64;
    let t = g.t as u64;
    let floor = tgood_upper_bound(polygon.gon(), q, t).ok()?.tgood_floor?;
    if g.size() as u64 > floor {
        return Some(format!("size {} above {floor} in {} q={q}", g.size(), polygon.family()));
    }
    let window = subgraph_ratio_bounds((q + 1) as f64, (q + 1 - t) as f64, lambda).ok()?;
    let vertices = g.subgraph_size(polygon);
    if !window.admits(vertices, polygon.num_elements()) {
        return Some(format!("{vertices} subgraph vertices outside the ratio window in {} q={q}", polygon.family()));
    }
    None
}

fn check_bounds(polygon: &IncidencePolygon, structures: &[GoodStructure]) -> Result<usize, String> {
    let lambda = second_eigenvalue(polygon).map_err(|e| e.to_string())?;
    for g in structures {
        if let Some(v) = bound_violation(polygon, lambda, g) {
            return Err(v);
        }
    }
    Ok(structures.len())
}

fn w33() -> &'static (IncidencePolygon, Vec<GoodStructure>) {
    static CELL: OnceLock<(IncidencePolygon, Vec<GoodStructure>)> = OnceLock::new();
    CELL.get_or_init(|| {
        let w = build_w3(3).unwrap();
        let out = enumerate_one_good(&w, &SearchOptions::default()).unwrap();
        assert!(out.complete);
        (w, out.solutions)
    })
}

fn planar_structures(plane: &IncidencePolygon) -> Vec<GoodStructure> {
    let mut out = Vec::new();
    for kind in [PlanarKind::PointOnLine, PlanarKind::PointOffLine, PlanarKind::Baer] {
        for line in [0, plane.num_lines() - 1] {
            for &point in &[
                plane.points_on(line)[0] as usize,
                (0..plane.num_points()).find(|&p| !plane.incident(p, line)).unwrap(),
            ] {
                let anchor = PlanarAnchor { point, line };
                if let Ok(g) = planar_one_good(plane, kind, Some(anchor)) {
                    out.push(g);
                }
            }
        }
    }
    out
}

fn polygon_axioms() -> Check {
    let mut built = Vec::new();
    for q in [2, 3, 4, 5, 9] {
        built.push(build_pg2(q).map_err(|e| e.to_string())?);
    }
    for q in [2, 3, 4, 5] {
        built.push(build_w3(q).map_err(|e| e.to_string())?);
    }
    for q in [2, 3] {
        built.push(build_hexagon(q).map_err(|e| e.to_string())?.0);
    }
    for p in &built {
        let m = p.verify_axioms().map_err(|e| e.to_string())?;
        let n = p.gon();
        ensure!(m.girth == Some(2 * n) && m.diameter == Some(n), "{} q={}: {m:?}", p.family(), p.q());
        ensure!(m.regular_degree() == Some(p.q() as usize + 1), "{} q={} is not regular", p.family(), p.q());
    }
    Ok(format!("{} polygons, largest H(3) with {} points", built.len(), built.last().unwrap().num_points()))
}

fn spectra() -> Check {
    let mut cases: Vec<(IncidencePolygon, f64)> = Vec::new();
    for q in 2..=5 {
        cases.push((build_pg2(q).unwrap(), (q as f64).sqrt()));
    }
    for q in 2..=4 {
        cases.push((build_w3(q).unwrap(), (2.0 * q as f64).sqrt()));
    }
    cases.push((build_hexagon(2).unwrap().0, 6f64.sqrt()));
    let mut worst = 0f64;
    for (p, want) in &cases {
        let got = second_eigenvalue(p).map_err(|e| e.to_string())?;
        ensure!((got - want).abs() < 1e-6, "{} q={}: {got} vs {want}", p.family(), p.q());
        worst = worst.max((got - want).abs());
    }
    Ok(format!("{} polygons, largest deviation {worst:.1e}", cases.len()))
}

fn bounds() -> Check {
    let b = tgood_upper_bound(3, 4, 1).map_err(|e| e.to_string())?;
    ensure!(b.tgood_floor == Some(7), "bound for PG(2,4) is {:?}", b.tgood_floor);
    ensure!((b.tgood_bound.unwrap() - 7.0).abs() < 1e-12, "real bound {:?}", b.tgood_bound);
    let mut checked = 0;
    for q in [2, 3, 4, 5, 9] {
        let plane = build_pg2(q).unwrap();
        checked += check_bounds(&plane, &planar_structures(&plane))?;
    }
    for q in [2, 3, 4, 5] {
        let w = build_w3(q).unwrap();
        checked += check_bounds(&w, &lift_structures(&w))?;
    }
    let (hex, _) = build_hexagon(2).unwrap();
    let ctx = HexagonContext::new(&hex).map_err(|e| e.to_string())?;
    let mut hexes = Vec::new();
    for s in all_four_spaces(ctx.field()).iter().step_by(11) {
        let sec = ctx.section(s).map_err(|e| e.to_string())?;
        for a in sec.points().into_iter().step_by(5) {
            hexes.push(ctx.construct(&sec, a).map_err(|e| e.to_string())?.0);
        }
    }
    checked += check_bounds(&hex, &hexes)?;
    for (p, t) in [
        (build_pg2(2).unwrap(), 1),
        (build_pg2(3).unwrap(), 1),
        (build_pg2(3).unwrap(), 2),
        (build_w3(2).unwrap(), 1),
        (build_w3(2).unwrap(), 2),
    ] {
        let out = enumerate_one_good(&p, &SearchOptions { t, symmetry_breaking: false, ..Default::default() })
            .map_err(|e| e.to_string())?;
        checked += check_bounds(&p, &out.solutions)?;
    }
    let (w, sols) = w33();
    checked += check_bounds(w, sols)?;
    Ok(format!("floor 7 for PG(2,4); {checked} constructed or searched structures within both bounds"))
}

fn lift_at_four() -> Check {
    let w = build_w3(4).unwrap();
    let lifts = lift_structures(&w);
    let sizes: BTreeSet<usize> = lifts.iter().map(GoodStructure::size).collect();
    ensure!(sizes == [21, 25, 29, 33].into(), "lift sizes {sizes:?}");
    for g in &lifts {
        let r = verify_tgood(&w, g);
        ensure!(r.valid && r.subgraph_regular && r.expected_degree == 4, "lift of size {} fails: {r:?}", g.size());
        ensure!(r.subgraph_girth == Some(8), "lift of size {} has girth {:?}", g.size(), r.subgraph_girth);
    }
    let largest = lifts.iter().find(|g| g.size() == 33).unwrap();
    let cage = cage_bounds(4, 8).map_err(|e| e.to_string())?;
    ensure!(
        largest.subgraph_size(&w) == 104 && cage == 104,
        "size 33 leaves {} vertices, cage bound {cage}",
        largest.subgraph_size(&w)
    );
    check_bounds(&w, &lifts)?;
    Ok(format!("{} lifts, sizes {sizes:?}, size 33 leaves 104 vertices", lifts.len()))
}

/// Row of the intersection table a pair falls in, when the second line set is not contained in
/// the first.
fn table_row(r: &HexCaseReport) -> Option<RowKey> {
    (!r.l2_subset_l1).then(|| {
        (
            r.case.letter(),
            r.dim_pi_a_meet_s,
            if r.case.letter() == 'c' && r.dim_pi_a_meet_s == 1 { r.a_in_pi_p } else { None },
        )
    })
}

fn check_pair(
    ctx: &HexagonContext,
    sec: &polyforge::constructions::Section,
    a: usize,
    lambda: f64,
) -> Result<(GoodStructure, HexCaseReport), String> {
    let predicted = ctx.predict(sec, a).map_err(|e| e.to_string())?;
    let (g, counted) = ctx.construct(sec, a).map_err(|e| e.to_string())?;
    ensure!(predicted == counted, "prediction {predicted:?} but counted {counted:?}");
    ensure!(counted.size == g.size() as u64, "size {} but counted {}", g.size(), counted.size);
    let r = verify_tgood(ctx.hex(), &g);
    ensure!(r.valid, "not 1-good: {r:?}");
    if let Some(v) = bound_violation(ctx.hex(), lambda, &g) {
        return Err(v);
    }
    Ok((g, counted))
}

fn hexagon_construction() -> Check {
    let (hex, _) = build_hexagon(2).unwrap();
    let ctx = HexagonContext::new(&hex).map_err(|e| e.to_string())?;
    let lambda = second_eigenvalue(&hex).map_err(|e| e.to_string())?;
    let spaces = all_four_spaces(ctx.field());
    ensure!(spaces.len() == 2667, "{} 4-spaces", spaces.len());
    let mut pairs = 0;
    let mut realized = BTreeSet::new();
    let mut rows: BTreeMap<RowKey, usize> = BTreeMap::new();
    for s in &spaces {
        let sec = ctx.section(s).map_err(|e| e.to_string())?;
        for a in sec.points() {
            let (g, r) = check_pair(&ctx, &sec, a, lambda).map_err(|e| format!("q=2, pair {pairs}: {e}"))?;
            realized.insert(g.size() as u64);
            if let Some(k) = table_row(&r) {
                *rows.entry(k).or_default() += 1;
            }
            pairs += 1;
        }
    }

    let (hex3, _) = build_hexagon(3).unwrap();
    let ctx3 = HexagonContext::new(&hex3).map_err(|e| e.to_string())?;
    let lambda3 = second_eigenvalue(&hex3).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..500 {
        let s = random_four_space(ctx3.field(), &mut rng);
        let sec = ctx3.section(&s).map_err(|e| e.to_string())?;
        let a = *sec.points().choose(&mut rng).ok_or("empty section")?;
        check_pair(&ctx3, &sec, a, lambda3).map_err(|e| format!("q=3, random pair {i}: {e}"))?;
    }
    let mut reps: BTreeMap<RowKey, usize> = rows.keys().map(|&k| (k, 0)).collect();
    for _ in 0..20_000 {
        if reps.values().all(|&n| n >= 3) {
            break;
        }
        let s = random_four_space(ctx3.field(), &mut rng);
        let sec = ctx3.section(&s).map_err(|e| e.to_string())?;
        for a in sec.points() {
            let Some(k) = table_row(&ctx3.predict(&sec, a).map_err(|e| e.to_string())?) else { continue };
            let n = reps.entry(k).or_default();
            if *n < 3 {
                check_pair(&ctx3, &sec, a, lambda3).map_err(|e| format!("q=3, row {k:?}: {e}"))?;
                *n += 1;
            }
        }
    }
    ensure!(reps.values().all(|&n| n >= 3), "q=3 rows short of three representatives: {reps:?}");

    let achievable = achievable_sizes(2);
    ensure!(
        realized == achievable,
        "{pairs} pairs at q=2 agree with the counts and verify, but the realized sizes {realized:?} differ from {achievable:?} (never realized: {:?})",
        achievable.difference(&realized).collect::<Vec<_>>()
    );
    Ok(format!("{pairs} pairs at q=2, sizes {realized:?}; 500 random pairs and {} rows at q=3", reps.len()))
}

fn cage_formulas() -> Check {
    let got = [cage_bounds(4, 8), cage_bounds(9, 8), cage_bounds(2, 12), cage_bounds(3, 12)];
    let got: Vec<u64> = got.into_iter().collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    ensure!(got == [104, 1386, 16, 324], "cage bounds {got:?}");
    ensure!(moore_bound(4, 8) == 80, "moore bound {}", moore_bound(4, 8));
    Ok("104, 1386, 16, 324 and Moore bound 80".into())
}

fn classify(
    w: &IncidencePolygon,
    sols: &[GoodStructure],
    duality: bool,
) -> Result<(PermGroup, Vec<SolutionClass>), String> {
    let g = collineation_generators(w).map_err(|e| e.to_string())?;
    let d = if duality { Some(w3_duality(w).ok_or("no duality")?) } else { None };
    let classes = classify_solutions(w, sols, &g, &lift_structures(w), d.as_ref()).map_err(|e| e.to_string())?;
    Ok((g, classes))
}

fn table_w33() -> Check {
    let (w, sols) = w33();
    let (g, classes) = classify(w, sols, false)?;
    ensure!(g.order() == 51840, "collineation group of order {}", g.order());
    compare_rows(&classes, &W33_TABLE)?;
    Ok(format!("{} structures in 13 classes, group order 51840", sols.len()))
}

fn tables_w34_w35_w37() -> Check {
    let mut notes = Vec::new();
    let w = build_w3(4).unwrap();
    let path = std::env::temp_dir().join(format!("polyforge-acceptance-w34-{}.json", std::process::id()));
    let _ = std::fs::remove_file(&path);
    let mut job =
        CheckpointedSearch::new(&w, &SearchOptions::default(), None, Some(&path)).map_err(|e| e.to_string())?;
    let out = job.run(32).map_err(|e| e.to_string())?;
    let _ = std::fs::remove_file(&path);
    ensure!(out.complete, "W(3,4) search incomplete");
    let (_, classes) = classify(&w, &out.solutions, true)?;
    let merged = merge_dual_pairs(&classes);
    compare_rows(&merged, &W34_TABLE).map_err(|e| format!("W(3,4) up to duality: {e}"))?;
    check_bounds(&w, &out.solutions)?;
    notes.push(format!("W(3,4) {} classes, 15 up to duality", classes.len()));

    if std::env::var("POLYFORGE_LONG").is_ok_and(|v| v == "1") {
        let w = build_w3(5).unwrap();
        let out = enumerate_one_good(&w, &SearchOptions::default()).map_err(|e| e.to_string())?;
        let (_, classes) = classify(&w, &out.solutions, false)?;
        compare_rows(&classes, &W35_TABLE).map_err(|e| format!("W(3,5): {e}"))?;
        notes.push("W(3,5) 11 classes".into());
    } else {
        notes.push("W(3,5) not run (POLYFORGE_LONG=1)".into());
    }

    let w = build_w3(7).unwrap();
    let g = collineation_generators(&w).map_err(|e| e.to_string())?;
    let np = w.num_points();
    let lambda = second_eigenvalue(&w).map_err(|e| e.to_string())?;
    let mut pending = expected_rows(&W37_LIFT_ROWS);
    let mut seen = BTreeSet::new();
    for lift in lift_structures(&w) {
        if pending.is_empty() {
            break;
        }
        let elements = lift.elements(np);
        let Ok(h) = g.set_stabilizer(&elements, StabilizerMethod::Backtrack) else { continue };
        if !seen.insert((lift.subgraph_size(&w), h.order())) {
            continue;
        }
        let outside: Vec<usize> = (0..w.num_elements()).filter(|e| elements.binary_search(e).is_err()).collect();
        let row = (lift.subgraph_size(&w), h.order(), h.orbit_multiset(&outside), h.orbit_multiset(&elements), true);
        let Some(i) = pending.iter().position(|r| *r == row) else { continue };
        let fixed = enumerate_with_group(&w, &h, &SearchOptions::default()).map_err(|e| e.to_string())?;
        ensure!(fixed.complete, "orbit search under a group of order {} incomplete", h.order());
        ensure!(
            fixed.solutions.contains(&lift),
            "orbit search under the stabilizer of order {} misses the lift",
            h.order()
        );
        for s in &fixed.solutions {
            ensure!(verify_tgood(&w, s).valid, "orbit search produced a structure that is not 1-good");
            if let Some(v) = bound_violation(&w, lambda, s) {
                return Err(v);
            }
        }
        notes.push(format!("q=7 {}/{} ({} fixed)", row.0, row.1, fixed.solutions.len()));
        pending.remove(i);
    }
    ensure!(pending.is_empty(), "W(3,7) rows not matched by any lift: {pending:?}");
    Ok(notes.join("; "))
}

fn completeness() -> Check {
    let mut total = 0;
    for p in [build_pg2(2).unwrap(), build_pg2(3).unwrap(), build_w3(2).unwrap()] {
        for t in [1, 2] {
            let mut brute = brute_force_tgood(&p, t).ok_or("brute force refused")?;
            brute.sort_by(|a, b| (a.size(), &a.points, &a.lines).cmp(&(b.size(), &b.points, &b.lines)));
            let opts = SearchOptions { t, symmetry_breaking: false, include_full: true, ..Default::default() };
            let found = enumerate_one_good(&p, &opts).map_err(|e| e.to_string())?.solutions;
            ensure!(
                found == brute,
                "{} q={} t={t}: {} found, {} by brute force",
                p.family(),
                p.q(),
                found.len(),
                brute.len()
            );
            total += found.len();
        }
    }
    Ok(format!("{total} structures, identical sets"))
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        return;
    }
    let only: BTreeSet<u32> = args.iter().filter_map(|a| a.parse().ok()).collect();
    let criteria: [Criterion; 9] = [
        (1, "polygon axioms", polygon_axioms),
        (2, "second eigenvalues", spectra),
        (3, "size and ratio bounds", bounds),
        (4, "lifts in W(3,4)", lift_at_four),
        (5, "hexagon construction", hexagon_construction),
        (6, "cage formulas", cage_formulas),
        (7, "W(3,3) classification", table_w33),
        (8, "W(3,4), W(3,5) and W(3,7) tables", tables_w34_w35_w37),
        (9, "search against brute force", completeness),
    ];
    let mut failed = 0;
    for (n, name, f) in criteria {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS  {n}. {name}: {detail} ({secs:.1} s)"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {n}. {name}: {why} ({secs:.1} s)");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
