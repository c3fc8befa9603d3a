//! Executes a [`RunPlan`]. Every artifact is a pure function of the plan, so
//! replaying a plan reproduces its files byte for byte.

use std::fmt;
use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use arbor_core::basic::{greedy_lfd, peeling_bound, reduce_forest_diameter};
use arbor_core::forest::{combine_fd, combine_fd_with, combine_lfd, target_colors};
use arbor_core::graph::{
    arboricity_by_flow, arboricity_upper_bound, degeneracy, generate, nash_williams_arboricity, parse_edge_list,
    pseudo_arboricity, to_edge_list, Family, GeneratorSpec, EXACT_ORACLE_LIMIT, FLOW_ORACLE_LIMIT,
};
use arbor_core::orientation::low_outdegree_orientation;
use arbor_core::star::{star_forest_decomposition, Thresholds};
use arbor_core::verify::{
    check_forest_decomposition, check_orientation, check_star_forest, exhaustive_min_diameter_fd, max_color_diameter,
    ValidityReport, Violation,
};
use arbor_core::{Color, Epsilon, MultiGraph, Orientation, PaletteSet, PartialColoring, RandomStream, RoundLedger};

use crate::plan::*;

/// A mistake in the invocation rather than a failed run.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Core errors that point at bad arguments count as usage errors.
fn core(err: arbor_core::Error) -> anyhow::Error {
    match err {
        arbor_core::Error::InvalidParameter(msg) => usage(msg),
        other => other.into(),
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(value: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("results serialize");
    text.push('\n');
    text
}

fn load_graph(source: &GraphSource) -> Result<MultiGraph> {
    match (&source.input, &source.generator) {
        (Some(path), None) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_edge_list(&text).with_context(|| format!("parsing {}", path.display()))
        }
        (None, Some(spec)) => {
            let spec: GeneratorSpec = serde_json::from_str(spec).map_err(|e| usage(format!("--gen: {e}")))?;
            generate(&spec).map_err(core)
        }
        _ => Err(usage("give exactly one of --in and --gen")),
    }
}

fn epsilon(value: f64, g: &MultiGraph) -> Result<Epsilon> {
    Epsilon::for_graph(value, g.vertex_count()).map_err(core)
}

fn read_palettes(path: &Path) -> Result<PaletteSet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let lists: Vec<Vec<Color>> = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    PaletteSet::from_lists(lists).map_err(core)
}

fn palettes(args: &PaletteArgs, g: &MultiGraph, stream: &RandomStream) -> Result<Option<PaletteSet>> {
    let pal = match (&args.palettes, args.list_size, args.universe) {
        (Some(path), _, _) => read_palettes(path)?,
        (None, Some(size), Some(universe)) => PaletteSet::random(g.edge_count(), size, universe, stream).map_err(core)?,
        _ => return Ok(None),
    };
    if pal.len() != g.edge_count() {
        return Err(usage(format!("{} palettes for {} edges", pal.len(), g.edge_count())));
    }
    Ok(Some(pal))
}

fn fail(report: &mut ValidityReport, subject: &str, description: String) {
    report.ok = false;
    report.violations.push(Violation { subject: subject.into(), description });
}

fn merge(report: &mut ValidityReport, other: ValidityReport) {
    report.ok &= other.ok;
    report.violations.extend(other.violations);
}

/// Writes the result, report and ledger and returns whether the report
/// passed.
fn finish(outputs: &Outputs, mut result: Value, report: &ValidityReport, ledger: &RoundLedger) -> Result<bool> {
    result["report"] = serde_json::to_value(report)?;
    result["rounds"] = json!(ledger.total_rounds());
    emit(outputs.out.as_deref(), &pretty(&result))?;
    if let Some(path) = &outputs.report {
        emit(Some(path), &pretty(report))?;
    }
    if let Some(path) = &outputs.ledger {
        emit(Some(path), &pretty(ledger))?;
    }
    Ok(report.ok)
}

pub fn execute(plan: &RunPlan) -> Result<bool> {
    let command = plan.command.as_ref().ok_or_else(|| usage("no subcommand given; see --help"))?;
    let stream = RandomStream::new(plan.seed);
    match command {
        Command::Gen(args) => gen(args, plan.seed),
        Command::Orient(args) => orient(args, &stream),
        Command::Decompose(args) => decompose(args, &stream),
        Command::Star(args) => star(args, &stream),
        Command::Lfd(args) => lfd(args, &stream),
        Command::Verify(args) => verify(args),
        Command::Bench(args) => bench(args, plan.seed),
        Command::Oracle(args) => oracle(args),
    }
}

fn gen(args: &GenArgs, seed: u64) -> Result<bool> {
    let spec = args.family.spec(seed).map_err(usage)?;
    let g = generate(&spec).map_err(core)?;
    emit(args.out.as_deref(), &to_edge_list(&g))?;
    Ok(true)
}

fn orient(args: &OrientArgs, stream: &RandomStream) -> Result<bool> {
    let g = load_graph(&args.source)?;
    let eps = epsilon(args.eps, &g)?;
    let mut ledger = RoundLedger::new();
    let run = low_outdegree_orientation(&g, eps, args.a_star, stream, &mut ledger)?;
    let report = check_orientation(&g, &run.orientation, run.threshold.threshold, false);
    let result = json!({
        "command": "orient",
        "eps": args.eps,
        "orientation": run.orientation,
        "threshold": run.threshold.threshold,
        "a_star_bound": run.threshold.a_star_bound,
        "max_outdegree": run.orientation.max_outdegree(&g),
        "reversals": run.reversals,
        "longest_path": run.longest_path,
    });
    finish(&args.outputs, result, &report, &ledger)
}

fn decompose(args: &DecomposeArgs, stream: &RandomStream) -> Result<bool> {
    let g = load_graph(&args.source)?;
    let eps = epsilon(args.eps, &g)?;
    let mut ledger = RoundLedger::new();
    let mut details = json!({});
    let mut limit = None;
    let coloring: Option<PartialColoring> = match args.algo {
        Algorithm::CombineFd | Algorithm::Diameter => {
            let run = match (args.a_bound, args.strategy) {
                (None, None) => combine_fd(&g, eps, stream, &mut ledger)?,
                (a, strategy) => {
                    let a = a.unwrap_or_else(|| arboricity_upper_bound(&g));
                    combine_fd_with(&g, eps, a, strategy.map(Into::into), stream, &mut ledger)?
                }
            };
            details = json!({
                "a_bound": run.a_bound,
                "main_colors": run.main_colors,
                "leftover_colors": run.leftover_colors,
                "leftover_edges": run.leftover_edges.len(),
                "good": run.good,
                "retries": run.retries,
                "strategy": run.strategy,
            });
            if args.algo == Algorithm::Diameter {
                let split =
                    reduce_forest_diameter(&g, &run.coloring, run.a_bound, eps, &stream.derive("cli-diameter", 0), &mut ledger)?;
                let offset = split.kept.color_bound();
                let mut merged = split.kept.clone();
                for e in g.edge_ids() {
                    if let Some(c) = split.moved.get(e) {
                        merged.set(e, offset + c);
                    }
                }
                details["moved_edges"] = json!(split.moved.colored_count());
                details["moved_colors"] = json!(split.moved_colors());
                Some(merged)
            } else {
                limit = Some(target_colors(run.a_bound, eps));
                Some(run.coloring)
            }
        }
        Algorithm::GreedyLfd => {
            let a_star = pseudo_arboricity(&g).0.value;
            let t = peeling_bound(eps, a_star);
            limit = Some(t);
            details = json!({ "a_star": a_star, "palette_size": t });
            Some(greedy_lfd(&g, eps, Some(a_star), &PaletteSet::uniform(g.edge_count(), t), &mut ledger)?)
        }
        Algorithm::Exhaustive => {
            let k = args.colors.ok_or_else(|| usage("--algo exhaustive needs --colors"))?;
            let found = exhaustive_min_diameter_fd(&g, k).map_err(core)?;
            limit = Some(k);
            details = json!({ "min_diameter": found.diameter, "leaves_visited": found.leaves_visited });
            found.coloring
        }
    };
    let mut report = match &coloring {
        Some(c) => check_forest_decomposition(&g, c, None),
        None => {
            let mut r = check_forest_decomposition(&g, &PartialColoring::new(g.edge_count()), None);
            fail(&mut r, "graph", format!("no forest decomposition with {} colors", args.colors.unwrap_or(0)));
            r
        }
    };
    let mut diameter = None;
    if let Some(c) = &coloring {
        if !c.is_total() {
            fail(&mut report, "coloring", format!("{} edges uncolored", g.edge_count() - c.colored_count()));
        }
        if let Some(k) = limit.filter(|&k| c.color_count() > k) {
            fail(&mut report, "coloring", format!("{} colors exceed the limit {k}", c.color_count()));
        }
        if report.ok {
            diameter = Some(max_color_diameter(&g, c)?);
        }
    }
    if let (Some(demand), Some(found)) = (args.max_diameter, diameter) {
        if found > demand {
            fail(&mut report, "diameter", format!("largest tree diameter {found} exceeds {demand}"));
        }
    }
    let result = json!({
        "command": "decompose",
        "algorithm": args.algo,
        "eps": args.eps,
        "coloring": coloring,
        "colors": coloring.as_ref().map(PartialColoring::color_count),
        "max_diameter": diameter,
        "details": details,
    });
    finish(&args.outputs, result, &report, &ledger)
}

fn star(args: &StarArgs, stream: &RandomStream) -> Result<bool> {
    let g = load_graph(&args.source)?;
    let eps = epsilon(args.eps, &g)?;
    let pal = palettes(&args.palettes, &g, &stream.derive("cli-palettes", 0))?;
    let thresholds = if args.relaxed { Thresholds::Relaxed } else { Thresholds::Strict };
    let mut ledger = RoundLedger::new();
    let run = star_forest_decomposition(&g, eps, args.mode.into(), pal.as_ref(), thresholds, stream, &mut ledger)
        .map_err(core)?;
    let mut report = check_star_forest(&g, &run.coloring);
    if let Some(p) = &pal {
        merge(&mut report, check_forest_decomposition(&g, &run.coloring, Some(p)));
    }
    if run.coloring.color_count() > run.color_bound {
        fail(&mut report, "coloring", format!("{} colors exceed the bound {}", run.coloring.color_count(), run.color_bound));
    }
    let result = json!({
        "command": "star",
        "mode": run.mode,
        "eps": args.eps,
        "coloring": run.coloring,
        "colors": run.coloring.color_count(),
        "a_bound": run.a_bound,
        "t": run.t,
        "allowed_deficit": run.allowed_deficit,
        "max_deficit": run.max_deficit,
        "bound_met": run.bound_met,
        "leftover_edges": run.leftover_edges.len(),
        "color_bound": run.color_bound,
        "color_factor": run.color_factor,
        "lll_rounds": run.lll_rounds,
    });
    finish(&args.outputs, result, &report, &ledger)
}

fn lfd(args: &LfdArgs, stream: &RandomStream) -> Result<bool> {
    let g = load_graph(&args.source)?;
    let eps = epsilon(args.eps, &g)?;
    let pal = palettes(&args.palettes, &g, &stream.derive("cli-palettes", 0))?
        .ok_or_else(|| usage("lfd needs --palettes or --list-size with --universe"))?;
    let a = args.a.unwrap_or_else(|| arboricity_upper_bound(&g));
    let mut ledger = RoundLedger::new();
    let run = combine_lfd(&g, &pal, a, eps, args.split.into(), stream, &mut ledger).map_err(core)?;
    let mut report = check_forest_decomposition(&g, &run.coloring, Some(&pal));
    if !run.coloring.is_total() {
        fail(&mut report, "coloring", "some edges are uncolored".into());
    }
    let result = json!({
        "command": "lfd",
        "eps": args.eps,
        "a": a,
        "coloring": run.coloring,
        "colors": run.coloring.color_count(),
        "side_edges": run.side_edges.len(),
        "leftover_edges": run.leftover_edges.len(),
        "decolored_edges": run.decolored_edges.len(),
        "split_attempts": run.split_attempts,
        "retries": run.retries,
        "strategy": run.strategy,
    });
    finish(&args.outputs, result, &report, &ledger)
}

/// Pulls `key` out of a result file, or takes the whole file when it is the
/// bare artifact.
fn artifact(value: &Value, key: &str) -> Value {
    value.get(key).cloned().unwrap_or_else(|| value.clone())
}

fn verify(args: &VerifyArgs) -> Result<bool> {
    let g = load_graph(&args.source)?;
    let text = fs::read_to_string(&args.result).with_context(|| format!("reading {}", args.result.display()))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", args.result.display()))?;
    let pal = args.palettes.as_deref().map(read_palettes).transpose()?;
    let report = match args.kind {
        CheckKind::Forest | CheckKind::Star => {
            let coloring: PartialColoring =
                serde_json::from_value(artifact(&value, "coloring")).context("result holds no coloring")?;
            let mut report = if args.kind == CheckKind::Star {
                check_star_forest(&g, &coloring)
            } else {
                check_forest_decomposition(&g, &coloring, None)
            };
            if let Some(p) = &pal {
                merge(&mut report, check_forest_decomposition(&g, &coloring, Some(p)));
            }
            if !coloring.is_total() {
                fail(&mut report, "coloring", "some edges are uncolored".into());
            }
            if let Some(k) = args.k.filter(|&k| coloring.color_count() > k) {
                fail(&mut report, "coloring", format!("{} colors exceed {k}", coloring.color_count()));
            }
            report
        }
        CheckKind::Orientation => {
            let orientation: Orientation =
                serde_json::from_value(artifact(&value, "orientation")).context("result holds no orientation")?;
            let k = args.k.ok_or_else(|| usage("orientation checks need --k"))?;
            check_orientation(&g, &orientation, k, false)
        }
    };
    emit(args.out.as_deref(), &pretty(&report))?;
    Ok(report.ok)
}

#[derive(Serialize)]
struct BenchRow {
    n: usize,
    eps: f64,
    algorithm: String,
    colors: usize,
    max_diameter: Option<usize>,
    rounds: u64,
    wall_time_ms: f64,
}

fn bench_one(n: usize, k: usize, eps: f64, algo: BenchAlgorithm, seed: u64, timing: bool) -> Result<BenchRow> {
    let stream = RandomStream::new(seed).derive("bench", n as u64);
    let g = generate(&GeneratorSpec::new(Family::RandomForestUnion { n, k }, seed))?;
    let e = Epsilon::new(eps)?;
    let mut ledger = RoundLedger::new();
    let start = Instant::now();
    let (colors, coloring) = match algo {
        BenchAlgorithm::CombineFd => {
            let run = combine_fd(&g, e, &stream, &mut ledger)?;
            (run.coloring.color_count(), Some(run.coloring))
        }
        BenchAlgorithm::GreedyLfd => {
            let a_star = pseudo_arboricity(&g).0.value;
            let t = peeling_bound(e, a_star);
            let c = greedy_lfd(&g, e, Some(a_star), &PaletteSet::uniform(g.edge_count(), t), &mut ledger)?;
            (c.color_count(), Some(c))
        }
        BenchAlgorithm::Orient => {
            let run = low_outdegree_orientation(&g, e, None, &stream, &mut ledger)?;
            (run.orientation.max_outdegree(&g), None)
        }
    };
    let wall = start.elapsed().as_secs_f64() * 1000.0;
    let max_diameter = coloring.map(|c| max_color_diameter(&g, &c)).transpose()?;
    let name = serde_json::to_value(algo)?.as_str().expect("unit variant").to_string();
    Ok(BenchRow {
        n,
        eps,
        algorithm: name,
        colors,
        max_diameter,
        rounds: ledger.total_rounds(),
        wall_time_ms: if timing { wall } else { 0.0 },
    })
}

fn bench(args: &BenchArgs, seed: u64) -> Result<bool> {
    let mut configs = Vec::new();
    for &n in &args.sizes {
        for &eps in &args.eps {
            for &algo in &args.algos {
                configs.push((n, eps, algo));
            }
        }
    }
    let rows: Vec<Result<BenchRow>> =
        configs.par_iter().map(|&(n, eps, algo)| bench_one(n, args.k, eps, algo, seed, !args.no_timing)).collect();
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut all_ok = true;
    for ((n, eps, algo), row) in configs.iter().zip(rows) {
        match row {
            Ok(row) => writer.serialize(row)?,
            Err(err) => {
                all_ok = false;
                eprintln!("skipping n={n} eps={eps} {algo:?}: {err:#}");
            }
        }
    }
    let bytes = writer.into_inner().map_err(|e| anyhow::anyhow!("flushing csv: {e}"))?;
    emit(args.out.as_deref(), &String::from_utf8(bytes)?)?;
    Ok(all_ok)
}

fn oracle(args: &OracleArgs) -> Result<bool> {
    let g = load_graph(&args.source)?;
    let n = g.vertex_count();
    let (pseudo, _) = pseudo_arboricity(&g);
    let (arboricity, method) = if n <= EXACT_ORACLE_LIMIT {
        (nash_williams_arboricity(&g).map_err(core)?, "subsets")
    } else if n <= FLOW_ORACLE_LIMIT {
        (arboricity_by_flow(&g), "flow")
    } else {
        (arboricity_by_flow(&g), "flow-large")
    };
    let mut result = json!({
        "n": n,
        "m": g.edge_count(),
        "simple": g.is_simple(),
        "max_degree": g.max_degree(),
        "arboricity": arboricity,
        "arboricity_method": method,
        "pseudo_arboricity": pseudo,
        "degeneracy": degeneracy(&g).value,
    });
    if let Some(k) = args.min_diameter_colors {
        let found = exhaustive_min_diameter_fd(&g, k).map_err(core)?;
        result["min_diameter"] = json!({ "colors": k, "diameter": found.diameter, "coloring": found.coloring });
    }
    emit(args.out.as_deref(), &pretty(&result))?;
    Ok(true)
}
