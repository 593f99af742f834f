use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use polyforge::constructions::{verify_tgood, ConstructionParams, ConstructionRegistry, GoodStructure, PlanarKind};
use polyforge::io::{
    self, ClassificationFile, GroupFile, SolutionsFile, StructureFile, CLASSIFICATION_FORMAT, SOLUTIONS_FORMAT,
};
use polyforge::permgroup::{collineation_generators, w3_duality, PermGroup, StabilizerMethod};
use polyforge::polygon::{IncidencePolygon, PolygonRegistry};
use polyforge::search::{
    classify_solutions, enumerate_one_good, enumerate_with_group, lift_structures, merge_dual_pairs,
    CheckpointedSearch, SearchOptions, SearchOutcome,
};
use polyforge::spectral::{
    cage_bounds, moore_bound, second_eigenvalue, spectrum, subgraph_ratio_bounds, tgood_upper_bound,
};

use crate::manifest::Run;
use crate::{BoundArgs, ClassArgs, Cli, Command, ConstructArgs, SearchArgs, VerificationFailed};

pub fn dispatch(cli: Cli) -> Result<()> {
    let name = command_name(&cli.command);
    let mut run = Run::new(name, cli.seed, cli.manifest.clone());
    match &cli.command {
        Command::Build { polygon, q, out } => build(&mut run, polygon, *q, out)?,
        Command::VerifyPolygon { host } => verify_polygon(&mut run, host)?,
        Command::Construct(args) => construct(&mut run, args, cli.seed)?,
        Command::VerifyGood { host, structure } => verify_good(&mut run, host, structure)?,
        Command::Bound(args) => bound(args)?,
        Command::Spectrum { host, json } => show_spectrum(&mut run, host, *json)?,
        Command::Search(args) => search(&mut run, args)?,
        Command::Classify { host, solutions, class } => classify(&mut run, host, solutions, class)?,
        Command::Report { classification, up_to_duality } => report(classification, *up_to_duality)?,
    }
    if let Some(path) = run.finish()? {
        eprintln!("manifest: {}", path.display());
    }
    Ok(())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Build { .. } => "build",
        Command::VerifyPolygon { .. } => "verify-polygon",
        Command::Construct(_) => "construct",
        Command::VerifyGood { .. } => "verify-good",
        Command::Bound(_) => "bound",
        Command::Spectrum { .. } => "spectrum",
        Command::Search(_) => "search",
        Command::Classify { .. } => "classify",
        Command::Report { .. } => "report",
    }
}

fn load_polygon(run: &mut Run, path: &Path) -> Result<IncidencePolygon> {
    run.input(path);
    Ok(io::read_polygon(path)?)
}

fn build(run: &mut Run, name: &str, q: u32, out: &Path) -> Result<()> {
    let polygon = PolygonRegistry::standard().get(name)?.build(q)?;
    run.write_json(out, &io::PolygonFile::from_polygon(&polygon))?;
    println!(
        "{} q={}: {} points, {} lines -> {}",
        polygon.family(),
        q,
        polygon.num_points(),
        polygon.num_lines(),
        out.display()
    );
    Ok(())
}

fn verify_polygon(run: &mut Run, host: &Path) -> Result<()> {
    let polygon = load_polygon(run, host)?;
    println!("{} q={}: {} points, {} lines", polygon.family(), polygon.q(), polygon.num_points(), polygon.num_lines());
    match polygon.verify_axioms() {
        Ok(m) => {
            println!("degree {}", m.regular_degree().map_or("irregular".into(), |d| d.to_string()));
            println!("girth {}", m.girth.map_or("none".into(), |g| g.to_string()));
            println!("diameter {}", m.diameter.map_or("none".into(), |d| d.to_string()));
            println!("ok: generalized {}-gon of order ({}, {})", polygon.gon(), polygon.q(), polygon.q());
            Ok(())
        }
        Err(e) => Err(VerificationFailed(e.to_string()).into()),
    }
}

fn parse_equations(s: &str) -> Result<Vec<Vec<u16>>> {
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|c| c.trim().parse::<u16>().with_context(|| format!("--equations: bad entry `{c}`")))
                .collect()
        })
        .collect()
}

fn construct(run: &mut Run, args: &ConstructArgs, seed: u64) -> Result<()> {
    let polygon = load_polygon(run, &args.host)?;
    let kind = match &args.kind {
        Some(k) => Some(PlanarKind::parse(k).ok_or_else(|| anyhow!("--kind: unknown planar structure `{k}`"))?),
        None => None,
    };
    let params = ConstructionParams {
        kind,
        point: args.point,
        line: args.line,
        anchor: args.anchor,
        equations: args.equations.as_deref().map(parse_equations).transpose()?,
        seed,
    };
    let (g, provenance) = ConstructionRegistry::standard().run(&args.construction, &polygon, &params)?;
    let report = verify_tgood(&polygon, &g);
    run.write_json(&args.out, &StructureFile::new(&g, Some(provenance), Some(report.clone())))?;
    println!("{} structure: {} points, {} lines, size {}", args.construction, g.points.len(), g.lines.len(), g.size());
    print_report(&report);
    if !report.valid {
        return Err(VerificationFailed(format!("{} is not {}-good", args.out.display(), g.t)).into());
    }
    Ok(())
}

fn print_report(r: &polyforge::constructions::TGoodReport) {
    println!("t-good ({}): {}", r.t, if r.valid { "yes" } else { "no" });
    println!("point violations {}, line violations {}", r.point_violations.len(), r.line_violations.len());
    println!(
        "subgraph: {} vertices, {}-regular: {}, girth {}",
        r.subgraph_vertices,
        r.expected_degree,
        if r.subgraph_regular { "yes" } else { "no" },
        r.subgraph_girth.map_or("none".into(), |g| g.to_string())
    );
}

fn verify_good(run: &mut Run, host: &Path, structure: &Path) -> Result<()> {
    let polygon = load_polygon(run, host)?;
    run.input(structure);
    let file: StructureFile = io::read_json(structure)?;
    let g = file.structure(&polygon, &structure.display().to_string())?;
    let report = verify_tgood(&polygon, &g);
    println!("size {}", g.size());
    print_report(&report);
    let mut failures = Vec::new();
    if !report.valid {
        failures.push(format!("not {}-good", g.t));
    }
    let q = polygon.q() as u64;
    if (g.t as u64) <= q && g.t > 0 {
        let b = tgood_upper_bound(polygon.gon(), q, g.t as u64)?;
        let floor = b.tgood_floor.expect("t-good bound has a floor");
        let ok = g.size() as u64 <= floor;
        println!(
            "size bound {:.6}, floor {floor}: {}",
            b.tgood_bound.unwrap_or(f64::NAN),
            if ok { "ok" } else { "exceeded" }
        );
        if !ok {
            failures.push("size exceeds the spectral bound".into());
        }
        let lambda = second_eigenvalue(&polygon)?;
        let w = subgraph_ratio_bounds((q + 1) as f64, (q + 1 - g.t as u64) as f64, lambda)?;
        let ok = w.admits(report.subgraph_vertices, polygon.num_elements());
        println!(
            "vertex ratio {:.6} in [{:.6}, {:.6}]: {}",
            report.subgraph_vertices as f64 / polygon.num_elements() as f64,
            w.lower_ratio.unwrap_or(0.0),
            w.upper_ratio.unwrap_or(1.0),
            if ok { "ok" } else { "outside" }
        );
        if !ok {
            failures.push("subgraph outside the ratio window".into());
        }
    }
    if !failures.is_empty() {
        return Err(VerificationFailed(format!("{}: {}", structure.display(), failures.join("; "))).into());
    }
    Ok(())
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| anyhow!("--{flag} is required in this mode"))
}

fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let width: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(String::len).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r.iter().enumerate().map(|(i, c)| format!("{c:>w$}", w = width[i])).collect();
        let _ = writeln!(out, "{}", line.join("  "));
    }
    out
}

fn bound(args: &BoundArgs) -> Result<()> {
    let m = &args.mode;
    let mut head: Vec<&str>;
    let mut row: Vec<String>;
    let json: serde_json::Value;
    if m.tgood {
        let (n, q, t) = (need(args.n, "n")?, need(args.q, "q")?, need(args.t, "t")?);
        let b = tgood_upper_bound(n, q, t)?;
        let (value, floor) = (b.tgood_bound.unwrap_or(f64::NAN), b.tgood_floor.unwrap_or(0));
        head = vec!["n", "q", "t", "bound", "floor"];
        row = vec![n.to_string(), q.to_string(), t.to_string(), format!("{value:.3}"), floor.to_string()];
        json = serde_json::to_value(&b)?;
        if let Some(c) = args.compare {
            head.extend(["compare", "within"]);
            row.extend([c.to_string(), if c <= floor { "yes" } else { "no" }.to_string()]);
        }
    } else if m.ratio {
        let (d, k, l) = (need(args.d, "d")?, need(args.k, "k")?, need(args.lambda, "lambda")?);
        let b = subgraph_ratio_bounds(d, k, l)?;
        head = vec!["d", "k", "lambda", "lower", "upper"];
        let lower =
            if b.lower_vacuous { "vacuous".to_string() } else { format!("{:.6}", b.lower_ratio.unwrap_or(0.0)) };
        row = vec![
            format!("{d:.6}"),
            format!("{k:.6}"),
            format!("{l:.6}"),
            lower,
            format!("{:.6}", b.upper_ratio.unwrap_or(1.0)),
        ];
        json = serde_json::to_value(&b)?;
    } else if m.cage {
        let (q, g) = (need(args.q, "q")?, need(args.g, "g")?);
        let v = cage_bounds(q, g)?;
        head = vec!["k", "g", "cage bound"];
        row = vec![(q + 1).to_string(), g.to_string(), v.to_string()];
        json = serde_json::json!({ "q": q, "k": q + 1, "g": g, "cage_bound": v });
    } else {
        let (k, g) = (need(args.k, "k")?, need(args.g, "g")?);
        if k.fract() != 0.0 || k < 0.0 {
            bail!("--k must be a whole number for the Moore bound");
        }
        let v = moore_bound(k as u64, g);
        head = vec!["k", "g", "moore bound"];
        row = vec![(k as u64).to_string(), g.to_string(), v.to_string()];
        json = serde_json::json!({ "k": k as u64, "g": g, "moore_bound": v });
    }
    if args.json {
        print!("{}", io::to_json_string(&json));
    } else {
        print!("{}", table(&[head.iter().map(|s| s.to_string()).collect(), row]));
    }
    Ok(())
}

fn show_spectrum(run: &mut Run, host: &Path, json: bool) -> Result<()> {
    let polygon = load_polygon(run, host)?;
    let s = spectrum(&polygon)?;
    let mut groups: Vec<(f64, usize)> = Vec::new();
    for &v in &s.gram_spectrum {
        let v = if v.abs() < 1e-9 { 0.0 } else { v };
        match groups.last_mut() {
            Some((x, c)) if (*x - v).abs() < 1e-6 => *c += 1,
            _ => groups.push((v, 1)),
        }
    }
    if json {
        let gs: Vec<_> = groups.iter().map(|(v, c)| serde_json::json!({ "gram": v, "multiplicity": c })).collect();
        let out = serde_json::json!({ "lambda1": s.lambda1, "lambda2": s.lambda2, "gram_eigenvalues": gs });
        print!("{}", io::to_json_string(&out));
        return Ok(());
    }
    println!("lambda1 {:.9}", s.lambda1);
    println!("lambda2 {:.9}", s.lambda2);
    let mut rows = vec![vec!["N N^T".to_string(), "adjacency".into(), "multiplicity".into()]];
    for (v, c) in groups {
        rows.push(vec![format!("{v:.9}"), format!("±{:.9}", v.sqrt()), c.to_string()]);
    }
    print!("{}", table(&rows));
    Ok(())
}

fn size_summary(solutions: &[GoodStructure]) -> String {
    let mut by: BTreeMap<usize, usize> = BTreeMap::new();
    for s in solutions {
        *by.entry(s.size()).or_default() += 1;
    }
    by.iter().map(|(s, c)| format!("{s}x{c}")).collect::<Vec<_>>().join(" ")
}

fn search(run: &mut Run, args: &SearchArgs) -> Result<()> {
    let polygon = load_polygon(run, &args.host)?;
    let opts = SearchOptions {
        t: args.t,
        symmetry_breaking: !args.no_symmetry_breaking,
        include_full: args.include_full,
        min_size: args.min_size,
        max_size: args.max_size,
        node_limit: args.node_limit,
        split_depth: args.split_depth,
    };
    let group: Option<PermGroup> = if let Some(path) = &args.group {
        run.input(path);
        let file: GroupFile = io::read_json(path)?;
        Some(file.group(&path.display().to_string())?)
    } else if let Some(path) = &args.stabilizer_of {
        run.input(path);
        let file: StructureFile = io::read_json(path)?;
        let s = file.structure(&polygon, &path.display().to_string())?;
        let g = collineation_generators(&polygon)?;
        let h = g.set_stabilizer(&s.elements(polygon.num_points()), StabilizerMethod::Auto)?;
        println!("stabilizer of {}: order {}", path.display(), h.order());
        Some(h)
    } else {
        None
    };
    let outcome: SearchOutcome = match (&args.checkpoint, &group) {
        (Some(cp), h) => CheckpointedSearch::new(&polygon, &opts, h.as_ref(), Some(cp))?.run(args.batch)?,
        (None, Some(h)) => enumerate_with_group(&polygon, h, &opts)?,
        (None, None) => enumerate_one_good(&polygon, &opts)?,
    };
    println!(
        "{} structures ({}); nodes {}, conflicts {}",
        outcome.solutions.len(),
        if outcome.complete { "complete" } else { "incomplete" },
        outcome.stats.nodes,
        outcome.stats.conflicts
    );
    println!("sizes {}", size_summary(&outcome.solutions));
    if !outcome.complete {
        eprintln!("warning: the search stopped early; rerun with the same checkpoint to continue");
    }
    let file = SolutionsFile {
        format: SOLUTIONS_FORMAT.to_string(),
        host: polyforge::constructions::Host::of(&polygon),
        t: args.t,
        complete: outcome.complete,
        symmetry_breaking: outcome.symmetry_breaking,
        stats: outcome.stats,
        solutions: outcome.solutions,
    };
    if let Some(dir) = &args.class.out_dir {
        run.write_json(&dir.join("solutions.json"), &file)?;
    }
    if args.classify {
        write_classification(run, &polygon, &file, &args.class)?;
    }
    Ok(())
}

fn classify(run: &mut Run, host: &Path, solutions: &Path, class: &ClassArgs) -> Result<()> {
    let polygon = load_polygon(run, host)?;
    run.input(solutions);
    let file: SolutionsFile = io::read_json(solutions)?;
    file.check(&polygon, &solutions.display().to_string())?;
    write_classification(run, &polygon, &file, class)
}

fn write_classification(
    run: &mut Run,
    polygon: &IncidencePolygon,
    sols: &SolutionsFile,
    args: &ClassArgs,
) -> Result<()> {
    let g = collineation_generators(polygon)?;
    let duality = if args.duality {
        Some(w3_duality(polygon).ok_or_else(|| anyhow!("--duality: no duality is known for this polygon"))?)
    } else {
        None
    };
    let lifts = lift_structures(polygon);
    let classes = classify_solutions(polygon, &sols.solutions, &g, &lifts, duality.as_ref())?;
    let merged = duality.as_ref().map(|_| merge_dual_pairs(&classes));
    let file = ClassificationFile {
        format: CLASSIFICATION_FORMAT.to_string(),
        host: sols.host,
        t: sols.t,
        group_order: g.order(),
        complete: sols.complete,
        solutions: sols.solutions.len(),
        stats: sols.stats,
        classes,
        classes_up_to_duality: merged,
    };
    println!("collineation group order {}; {} classes", file.group_order, file.classes.len());
    let text = io::render_class_table(&file.classes);
    print!("{text}");
    if let Some(m) = &file.classes_up_to_duality {
        println!("{} classes up to duality", m.len());
        print!("{}", io::render_class_table(m));
    }
    if let Some(dir) = &args.out_dir {
        run.write_json(&dir.join("classification.json"), &file)?;
        run.write(&dir.join("table.txt"), &text)?;
        if let Some(m) = &file.classes_up_to_duality {
            run.write(&dir.join("table-up-to-duality.txt"), &io::render_class_table(m))?;
        }
        for (i, c) in file.classes.iter().enumerate() {
            run.write_json(&dir.join(format!("class-{:03}.json", i + 1)), c)?;
        }
    }
    Ok(())
}

fn report(path: &Path, up_to_duality: bool) -> Result<()> {
    let file: ClassificationFile = io::read_json(path)?;
    if file.format != CLASSIFICATION_FORMAT {
        bail!("{}: field `format`: expected {CLASSIFICATION_FORMAT}", path.display());
    }
    let classes = if up_to_duality {
        file.classes_up_to_duality
            .as_ref()
            .ok_or_else(|| anyhow!("{}: no classes up to duality recorded", path.display()))?
    } else {
        &file.classes
    };
    println!(
        "{} q={} t={}: {} solutions, {} classes, group order {}{}",
        file.host.family,
        file.host.q,
        file.t,
        file.solutions,
        classes.len(),
        file.group_order,
        if file.complete { "" } else { " (incomplete search)" }
    );
    print!("{}", io::render_class_table(classes));
    Ok(())
}
