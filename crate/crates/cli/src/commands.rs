use std::path::Path;

use serde_json::{json, Value};

use flatveech::billiard::enumerate_with_options;
use flatveech::corridor::WalkOptions;
use flatveech::numerics::syntax::parse_exact;
use flatveech::numerics::Exact;
use flatveech::polygon::{classify_polygon, search_resonance_free_prefix, Classification, SearchOptions};
use flatveech::stable::{classify_veech_group_with, cylinder_decomposition, ClassifyOptions, Node, StableSurface};
use flatveech::surface::{holonomy_product, katok_zemljakov, KzMode};
use flatveech::veech::{rotation_group_with, theorem1_report_with};
use flatveech::{Error, Result};

use crate::input::{read_stable, read_table, Table};
use crate::report::{decimalize, envelope, error_envelope, to_value, Echo};
use crate::svg::Scene;
use crate::{exit_code, Cli, Command, Format};

const DEFAULT_LENGTH_BOUND: &str = "3";

/// What a command produced: the JSON result, a drawing, and whether the
/// result is partial.
struct Outcome {
    result: Value,
    scene: Scene,
    partial: bool,
}

pub fn run(cli: &Cli) -> u8 {
    let c = &cli.config;
    let echo = Echo {
        precision_bits: c.precision_bits,
        max_coeff: c.max_coeff,
        length_bound: c.length_bound.clone(),
        depth: c.depth as usize,
        seed: c.seed,
        node_budget: c.node_budget,
    };
    let name = cli.command.name();
    let outcome = dispatch(cli);
    let (json_out, scene, code) = match outcome {
        Ok(o) => (envelope(name, &echo, o.result), Some(o.scene), if o.partial { 4 } else { 0 }),
        Err(e) => {
            let code = exit_code(&e);
            let kind = if code == 5 { "out_of_scope" } else { kind_name(code) };
            let message = match e {
                Error::NoPolarNodes => {
                    "out of scope: without a polar node the Veech group is that of a surface with marked points"
                        .to_string()
                }
                other => other.to_string(),
            };
            eprintln!("flatveech {name}: {message}");
            let mut out = error_envelope(name, &echo, kind, &message, code as i32);
            if matches!(cli.command, Command::StableClassify { .. }) && code == 5 {
                out["verdict"] = json!("out of scope");
            }
            (out, None, code)
        }
    };
    if let Err(e) = emit(cli, &json_out, scene.as_ref()) {
        eprintln!("flatveech {name}: {e}");
        return 2;
    }
    code
}

fn kind_name(code: u8) -> &'static str {
    match code {
        2 => "invalid_input",
        3 => "precision",
        4 => "budget",
        _ => "error",
    }
}

fn emit(cli: &Cli, json_out: &Value, scene: Option<&Scene>) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(json_out).expect("json") + "\n";
    let svg = scene.map(Scene::render);
    let write = |path: Option<&Path>, s: &str| match path {
        Some(p) => std::fs::write(p, s),
        None => {
            print!("{s}");
            Ok(())
        }
    };
    match (cli.config.format, svg) {
        (Format::Json, _) | (_, None) => write(cli.config.output.as_deref(), &text),
        (Format::Svg, Some(s)) => write(cli.config.output.as_deref(), &s),
        (Format::Both, Some(s)) => {
            let Some(out) = cli.config.output.as_deref() else {
                return Err(std::io::Error::other("--format both needs --output"));
            };
            std::fs::write(out, &text)?;
            std::fs::write(out.with_extension("svg"), s)
        }
    }
}

fn length_bound(cli: &Cli) -> Result<Exact> {
    let b = parse_exact(cli.config.length_bound.as_deref().unwrap_or(DEFAULT_LENGTH_BOUND))?;
    if b.signum() < 0 {
        return Err(Error::Parse("length bound must not be negative".into()));
    }
    Ok(b)
}

fn walk_options(cli: &Cli) -> WalkOptions {
    WalkOptions { node_budget: cli.config.node_budget }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let prec = cli.config.precision_bits;
    match &cli.command {
        Command::PolygonAnalyze { input } => polygon_analyze(cli, &read_table(input, prec)?),
        Command::Diagonals { input } => diagonals(cli, &read_table(input, prec)?),
        Command::Unfold { input } => unfold(cli, &read_table(input, prec)?),
        Command::Veech { input } => veech(cli, &read_table(input, prec)?),
        Command::StableClassify { input } => stable_classify(cli, &read_stable(input)?),
        Command::UnboundedGenerate { n } => unbounded_generate(cli, *n),
    }
}

fn outline(table: &Table) -> Vec<[f64; 2]> {
    table.polygon().vertices().iter().map(|p| p.to_f64()).collect()
}

fn table_value(table: &Table) -> Value {
    let p = table.polygon();
    let mut v = json!({
        "vertices": to_value(&p.vertices()),
        "vertex_kinds": to_value(&p.vertex_kinds()),
        "edge_kinds": to_value(&p.edge_kinds()),
        "bounded": p.is_bounded(),
    });
    if let Table::Unbounded(u) = table {
        v["unbounded"] = to_value(&u.spec);
    }
    v
}

fn polygon_analyze(cli: &Cli, table: &Table) -> Result<Outcome> {
    let p = table.polygon();
    let classification = classify_polygon(p);
    let rotation = rotation_group_with(p, cli.config.max_coeff, cli.config.precision_bits)?;
    let product = p.is_bounded().then(|| to_value(&holonomy_product(p)));
    let result = json!({
        "table": table_value(table),
        "angles": to_value(&p.angles()),
        "classification": to_value(&classification),
        "holonomy_product": product,
        "rotation_group": to_value(&rotation),
    });
    let legend = p.angles().iter().enumerate().map(|(j, a)| format!("angle {j}: {:.12} pi", a.to_f64())).collect();
    let title = match classification {
        Classification::Rational => "rational table",
        Classification::Irrational { .. } => "irrational table",
        Classification::UndecidedNumeric { .. } => "table with undecided angles",
    };
    let scene = Scene { title: title.into(), polygons: vec![outline(table)], legend, ..Default::default() };
    Ok(Outcome { result, scene, partial: false })
}

fn diagonals(cli: &Cli, table: &Table) -> Result<Outcome> {
    let bound = length_bound(cli)?;
    let census = enumerate_with_options(table.polygon(), &bound, &walk_options(cli))?;
    let segments = census.diagonals.iter().map(|d| [d.start.to_f64(), d.end.to_f64()]).collect();
    let legend = census
        .diagonals
        .iter()
        .map(|d| format!("{:?} length {:.9}", d.itinerary.edge_indices, d.length_f64()))
        .collect();
    let scene = Scene {
        title: format!("{} generalized diagonals up to length {}", census.diagonals.len(), bound),
        polygons: vec![outline(table)],
        segments,
        legend,
        ..Default::default()
    };
    let result = json!({
        "table": table_value(table),
        "count": census.diagonals.len(),
        "census": to_value(&census),
    });
    Ok(Outcome { result, scene, partial: census.partial })
}

fn unfold(cli: &Cli, table: &Table) -> Result<Outcome> {
    let p = table.polygon();
    let mode = match classify_polygon(p) {
        Classification::Rational if p.is_bounded() => KzMode::Exact,
        _ => KzMode::Truncated(cli.config.depth as usize),
    };
    let surface = katok_zemljakov(p, mode)?;
    let copies: Vec<Vec<[f64; 2]>> =
        (0..surface.copies.len()).map(|c| surface.copy_vertices(c).iter().map(|v| v.to_f64()).collect()).collect();
    let legend = surface
        .cone_points
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_singular())
        .map(|(i, c)| format!("cone point {i} at vertex {}: {:?}", c.polygon_vertex, c.kind))
        .collect();
    let scene = Scene {
        title: format!("{} copies, genus {:?}", surface.copies.len(), surface.genus),
        polygons: vec![outline(table)],
        ghosts: copies,
        legend,
        ..Default::default()
    };
    let mode_value = match mode {
        KzMode::Exact => json!({ "mode": "exact" }),
        KzMode::Truncated(d) => json!({ "mode": "truncated", "depth": d }),
    };
    let result = json!({ "table": table_value(table), "construction": mode_value, "surface": to_value(&surface) });
    Ok(Outcome { result, scene, partial: false })
}

fn veech(cli: &Cli, table: &Table) -> Result<Outcome> {
    let bound = length_bound(cli)?;
    let report = theorem1_report_with(table.polygon(), &bound, &walk_options(cli))?;
    let segments = report.shortest_diagonal.iter().map(|d| [d.start.to_f64(), d.end.to_f64()]).collect();
    let legend = report.checklist.iter().map(|c| format!("{:?}: {}", c.status, c.anchor)).collect();
    let scene = Scene {
        title: format!("{:?}", report.conclusion),
        polygons: vec![outline(table)],
        segments,
        legend,
        ..Default::default()
    };
    let partial = report.census_partial;
    let result = json!({ "table": table_value(table), "report": to_value(&report) });
    Ok(Outcome { result, scene, partial })
}

fn stable_classify(cli: &Cli, surface: &StableSurface) -> Result<Outcome> {
    let max_length = match &cli.config.length_bound {
        Some(s) => Some(parse_exact(s)?),
        None => None,
    };
    let opts = ClassifyOptions { max_length, walk: walk_options(cli) };
    let verdict = classify_veech_group_with(surface, &opts)?;
    let decomposition = cylinder_decomposition(surface)?;
    let residues: Vec<Value> = surface
        .residues()
        .iter()
        .map(|(node, r)| {
            let Node::Polar { cylinders: (a, b) } = surface.nodes[*node] else { unreachable!() };
            json!({
                "node": node,
                "residue": to_value(r),
                "positive_branch": surface.cylinders[a].name,
                "negative_branch": surface.cylinders[b].name,
            })
        })
        .collect();
    let legend = residues.iter().map(|r| format!("node {}: residue {}", r["node"], r["residue"])).collect();
    let scene = Scene {
        title: verdict.name().into(),
        polygons: surface.pieces.iter().map(|p| p.vertices.iter().map(|v| v.to_f64()).collect()).collect(),
        legend,
        ..Default::default()
    };
    let result = json!({
        "surface": decimalize(to_value(surface)),
        "residues": residues,
        "decomposition": to_value(&decomposition),
        "classification": to_value(&verdict),
        "verdict": verdict.name(),
    });
    Ok(Outcome { result, scene, partial: false })
}

fn unbounded_generate(cli: &Cli, n: u32) -> Result<Outcome> {
    let opts = SearchOptions {
        max_coeff: cli.config.max_coeff,
        precision_bits: cli.config.precision_bits,
        ..SearchOptions::default()
    };
    let count = cli.config.depth as usize;
    let found = search_resonance_free_prefix(n, count, cli.config.seed, &opts)?;
    let table = flatveech::polygon::unbounded_polygon_with_precision(&found.spec, cli.config.precision_bits)?;
    let input = json!({ "unbounded": {
        "n": found.spec.n,
        "xs": found.spec.xs.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "truncation_depth": found.spec.truncation_depth,
    }});
    let legend = table.chain_angles.iter().enumerate().map(|(j, a)| format!("lambda {j}: {:.12}", a.to_f64())).collect();
    let scene = Scene {
        title: format!("resonance-free prefix of length {count}"),
        polygons: vec![table.polygon.vertices().iter().map(|p| p.to_f64()).collect()],
        legend,
        ..Default::default()
    };
    let result = json!({
        "search": to_value(&found),
        "chain_angles": to_value(&table.chain_angles),
        "input": input,
    });
    Ok(Outcome { result, scene, partial: false })
}
