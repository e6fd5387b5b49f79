use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use raag_core::partition::parse_partition;
use raag_core::rank::RankVerdict;
use raag_core::whitehead::{compose_all, outer_commute_oracle, outer_commute_predicate, GeneratorMap};
use raag_core::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::args::{
    AbelianArgs, Cli, Command, CommuteArgs, GlobalArgs, GraphSource, PartitionsArgs, RankArgs, SpineArgs, VerifyArgs,
};
use crate::report::{GraphInfo, Report};
use crate::suite::{self, SuiteConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Compute(String),
}

fn compute<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Compute(e.to_string())
}

/// What a command produced: the report, its text rendering, and whether a
/// checked property failed.
#[derive(Debug)]
pub struct Output {
    pub report: Report,
    pub text: String,
    pub failed: bool,
}

struct Body {
    parameters: BTreeMap<String, Value>,
    results: Value,
    text: String,
    failed: bool,
}

impl Body {
    fn new(parameters: impl IntoIterator<Item = (&'static str, Value)>, results: Value, text: String) -> Body {
        Body {
            parameters: parameters.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            results,
            text,
            failed: false,
        }
    }

    fn failed_if(mut self, failed: bool) -> Body {
        self.failed = failed;
        self
    }
}

struct Loaded {
    name: String,
    graph: SimplicialGraph,
}

fn load_graph(global: &GlobalArgs) -> Result<Loaded, CliError> {
    let source = global.graph.as_ref().ok_or_else(|| CliError::Usage("this command needs --graph".into()))?;
    match source {
        GraphSource::Fixture(name) => Ok(Loaded { name: name.clone(), graph: fixtures::load_fixture(name)? }),
        GraphSource::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            Ok(Loaded { name: path.display().to_string(), graph: parse_graph(&text)? })
        }
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let global = &cli.global;
    let start = Instant::now();
    let (command, graph, body) = match &cli.command {
        Command::Verify(args) => ("verify", None, verify(global, args)),
        other => {
            let loaded = load_graph(global)?;
            let g = &loaded.graph;
            let (name, body) = match other {
                Command::Analyze => ("analyze", analyze(g)?),
                Command::Partitions(args) => ("partitions", partitions(g, args)?),
                Command::Rank(args) => ("rank", rank(global, g, args)?),
                Command::Abelian(args) => ("abelian", abelian(global, g, args)?),
                Command::Commute(args) => ("commute", commute(global, g, args)?),
                Command::Spine(args) => ("spine", spine(global, g, args)?),
                Command::Verify(_) => unreachable!("handled above"),
            };
            (name, Some(GraphInfo::new(&loaded.name, g)), body)
        }
    };
    let elapsed = start.elapsed();
    let mut text = String::new();
    if let Some(info) = &graph {
        let _ = writeln!(text, "graph {} ({} vertices, {} edges, sha256 {})", info.name, info.vertices, info.edges, info.sha256);
    }
    text.push_str(&body.text);
    if global.timing {
        let _ = writeln!(text, "elapsed {elapsed:.2?}");
    }
    let report = Report {
        command: command.to_string(),
        graph,
        parameters: body.parameters,
        results: body.results,
        elapsed_ms: global.timing.then_some(elapsed.as_secs_f64() * 1e3),
    };
    Ok(Output { report, text, failed: body.failed })
}

fn names(g: &SimplicialGraph, set: VertexSet) -> Vec<String> {
    set.iter().map(|v| g.name(v).to_string()).collect()
}

fn part_text(g: &SimplicialGraph, p: &GWPartition) -> String {
    p.display(g).to_string()
}

fn auto_json(g: &SimplicialGraph, a: &WhiteheadAuto) -> Value {
    json!({ "partition": part_text(g, a.partition()), "multiplier": g.letter_name(a.multiplier()) })
}

fn auto_text(g: &SimplicialGraph, a: &WhiteheadAuto) -> String {
    format!("({}, {})", g.format_letters(a.side()), g.letter_name(a.multiplier()))
}

fn parse_vertex_list(g: &SimplicialGraph, items: &[String]) -> Result<VertexSet, CliError> {
    let mut set = VertexSet::default();
    for item in items.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
        set.insert(g.vertex(item)?);
    }
    Ok(set)
}

fn analyze(g: &SimplicialGraph) -> Result<Body, CliError> {
    let rel = g.relations();
    let mut text = String::new();
    let mut vertices = Vec::new();
    let width = g.names().iter().map(String::len).max().unwrap_or(0).max(6);
    let _ = writeln!(text, "{:<width$}  degree  principal  maximal  class  |I|  M(v)  link", "vertex");
    for v in g.vertices() {
        let inseparable = g.inseparable_sets_of_vertex(v).len();
        let m_single = m_single_closed_form(g, v);
        let link = names(g, g.link(v));
        let _ = writeln!(
            text,
            "{:<width$}  {:>6}  {:<9}  {:<7}  {:>5}  {:>3}  {:>4}  {{{}}}",
            g.name(v),
            g.degree(v),
            rel.is_principal(v),
            rel.is_maximal(v),
            rel.class_of[v],
            inseparable,
            m_single,
            link.join(" ")
        );
        vertices.push(json!({
            "name": g.name(v),
            "degree": g.degree(v),
            "link": link,
            "principal": rel.is_principal(v),
            "maximal": rel.is_maximal(v),
            "class": rel.class_of[v],
            "inseparable_sets": inseparable,
            "m_single": m_single,
        }));
    }
    let classes: Vec<Value> =
        rel.classes.iter().map(|c| json!({ "members": names(g, c.members), "abelian": c.abelian })).collect();
    for (i, c) in rel.classes.iter().enumerate() {
        let kind = if c.abelian { "abelian" } else { "non-abelian" };
        let _ = writeln!(text, "class {i}: {{{}}} {kind}", names(g, c.members).join(" "));
    }
    let barbed_violation = g.barbed_violation().map(|(u, v)| vec![g.name(u), g.name(v)]);
    let violation = condition_violation(g).map(|c| {
        json!({ "vertex": g.name(c.vertex), "first": g.name(c.first), "second": g.name(c.second) })
    });
    let partition_count = enumerate_partitions(g, g.all_vertices()).len();
    let _ = writeln!(text, "principal {{{}}}", names(g, rel.principal).join(" "));
    let _ = writeln!(text, "barbed {}", barbed_violation.is_none());
    let _ = writeln!(text, "condition holds {}", violation.is_none());
    let _ = writeln!(text, "partitions {partition_count}");
    let results = json!({
        "vertices": vertices,
        "classes": classes,
        "principal": names(g, rel.principal),
        "barbed": barbed_violation.is_none(),
        "barbed_violation": barbed_violation,
        "condition_holds": violation.is_none(),
        "condition_violation": violation,
        "partition_count": partition_count,
    });
    Ok(Body::new([], results, text))
}

fn partitions(g: &SimplicialGraph, args: &PartitionsArgs) -> Result<Body, CliError> {
    let within = match &args.within {
        Some(list) => parse_vertex_list(g, list)?,
        None => g.all_vertices(),
    };
    let parts = enumerate_partitions(g, within);
    let mut text = String::new();
    let mut listed = Vec::new();
    for p in &parts {
        let bases: Vec<String> = p.bases().iter().map(|l| g.letter_name(l)).collect();
        let _ = writeln!(text, "{}  bases {}", part_text(g, p), bases.join(" "));
        listed.push(json!({ "partition": part_text(g, p), "bases": bases }));
    }
    let _ = writeln!(text, "{} partitions", parts.len());
    let results = json!({ "count": parts.len(), "partitions": listed });
    Ok(Body::new([("within", json!(names(g, within)))], results, text))
}

fn rank(global: &GlobalArgs, g: &SimplicialGraph, args: &RankArgs) -> Result<Body, CliError> {
    let rel = g.relations();
    let set = match args.set.trim() {
        "V" => g.all_vertices(),
        "L" => rel.principal,
        list => parse_vertex_list(g, &list.split(',').map(str::to_string).collect::<Vec<_>>())?,
    };
    let value_of = |s: VertexSet| max_compatible(g, s, global.mode, global.budget).map_err(compute);
    let report = value_of(set)?;
    let lower = value_of(rel.principal)?.value;
    let upper = value_of(g.all_vertices())?.value;
    let witness: Vec<String> = report.witness.partitions().iter().map(|p| part_text(g, p)).collect();
    let mut text = format!(
        "set {} {{{}}} mode {}\nvalue {}\nvcd bounds {lower} <= vcd <= {upper}\n",
        args.set,
        names(g, set).join(" "),
        global.mode,
        report.value
    );
    if args.witness {
        for p in &witness {
            let _ = writeln!(text, "  {p}");
        }
    }
    let results = json!({
        "set": names(g, set),
        "mode": global.mode.to_string(),
        "value": report.value,
        "witness": witness,
        "vcd_lower": lower,
        "vcd_upper": upper,
    });
    let parameters = [
        ("set", json!(args.set)),
        ("mode", json!(global.mode.to_string())),
        ("budget", json!(global.budget)),
    ];
    Ok(Body::new(parameters, results, text))
}

fn verdict_json(verdict: &RankVerdict) -> Value {
    match verdict {
        RankVerdict::Pass => json!({ "status": "pass" }),
        RankVerdict::NotCommuting { first, second, predicate, oracle } => json!({
            "status": "not_commuting", "first": first, "second": second, "predicate": predicate, "oracle": oracle,
        }),
        RankVerdict::Dependent(exponents) => json!({ "status": "dependent", "exponents": exponents }),
    }
}

fn abelian(global: &GlobalArgs, g: &SimplicialGraph, args: &AbelianArgs) -> Result<Body, CliError> {
    if args.exponent < 1 {
        return Err(CliError::Usage("--exponent must be at least 1".into()));
    }
    let gens = build_abelian_generators(g, global.budget).map_err(compute)?;
    let expected = max_compatible(g, g.relations().principal, CompatMode::Strong, global.budget).map_err(compute)?.value;
    let verdict = verify_abelian_rank(g, &gens, args.exponent, global.bound).map_err(compute)?;
    let mut text = String::new();
    for (i, a) in gens.iter().enumerate() {
        let _ = writeln!(text, "{i}: {}", auto_text(g, a));
    }
    let _ = writeln!(text, "{} generators, M(L) = {expected}", gens.len());
    let _ = match &verdict {
        RankVerdict::Pass => writeln!(text, "verified: pairwise commuting, no inner product up to exponent {}", args.exponent),
        RankVerdict::NotCommuting { first, second, predicate, oracle } => {
            writeln!(text, "FAILED: generators {first} and {second} (criterion {predicate}, direct {oracle:?})")
        }
        RankVerdict::Dependent(exps) => writeln!(text, "FAILED: exponent vector {exps:?} gives an inner automorphism"),
    };
    let failed = verdict != RankVerdict::Pass || gens.len() != expected;
    let results = json!({
        "generators": gens.iter().map(|a| auto_json(g, a)).collect::<Vec<_>>(),
        "rank": gens.len(),
        "expected_rank": expected,
        "verdict": verdict_json(&verdict),
    });
    let parameters =
        [("exponent", json!(args.exponent)), ("bound", json!(global.bound)), ("budget", json!(global.budget))];
    Ok(Body::new(parameters, results, text).failed_if(failed))
}

fn parse_auto(g: &SimplicialGraph, part: &str, mult: &str) -> Result<WhiteheadAuto, CliError> {
    let p = parse_partition(g, part).map_err(|e| CliError::Usage(format!("{part}: {e}")))?;
    let m = g.parse_letter(mult)?;
    WhiteheadAuto::new(p, m).map_err(|e| CliError::Usage(format!("{mult}: {e}")))
}

fn map_json(g: &SimplicialGraph, f: &GeneratorMap) -> Value {
    let images: BTreeMap<String, String> =
        g.vertices().map(|v| (g.name(v).to_string(), f.image(v).display(g).to_string())).collect();
    json!(images)
}

fn map_text(g: &SimplicialGraph, label: &str, f: &GeneratorMap, out: &mut String) {
    let _ = writeln!(out, "  {label}:");
    for v in g.vertices() {
        let _ = writeln!(out, "    {} -> {}", g.name(v), f.image(v).display(g));
    }
}

/// Images of both automorphisms and of their commutator.
fn transcript(g: &SimplicialGraph, a: &WhiteheadAuto, b: &WhiteheadAuto, text: &mut String) -> Result<Value, CliError> {
    let (fa, fb) = (a.to_generator_map(g), b.to_generator_map(g));
    let commutator =
        compose_all(g, &[fa.clone(), fb.clone(), a.invert(g).to_generator_map(g), b.invert(g).to_generator_map(g)])
            .map_err(compute)?;
    map_text(g, "first", &fa, text);
    map_text(g, "second", &fb, text);
    map_text(g, "commutator", &commutator, text);
    Ok(json!({ "first": map_json(g, &fa), "second": map_json(g, &fb), "commutator": map_json(g, &commutator) }))
}

fn commute(global: &GlobalArgs, g: &SimplicialGraph, args: &CommuteArgs) -> Result<Body, CliError> {
    let pairs: Vec<(WhiteheadAuto, WhiteheadAuto)> = if args.all {
        let autos = suite::all_autos(g);
        autos.iter().enumerate().flat_map(|(i, a)| autos[i..].iter().map(move |b| (*a, *b))).collect()
    } else {
        let field = |v: &Option<String>| v.clone().unwrap_or_default();
        let a = parse_auto(g, &field(&args.left), &field(&args.left_mult))?;
        let b = parse_auto(g, &field(&args.right), &field(&args.right_mult))?;
        vec![(a, b)]
    };
    let mut text = String::new();
    let (mut agree, mut unknown) = (0usize, 0usize);
    let mut disagreements = Vec::new();
    let mut single = Value::Null;
    for (a, b) in &pairs {
        let predicate = outer_commute_predicate(g, a, b);
        let oracle = outer_commute_oracle(g, a, b, global.bound).map_err(compute)?;
        match oracle {
            Some(o) if o == predicate => agree += 1,
            None => unknown += 1,
            Some(_) => {}
        }
        if !args.all {
            let _ = writeln!(text, "first {}\nsecond {}", auto_text(g, a), auto_text(g, b));
            let verdict = oracle.map_or("unknown".to_string(), |o| o.to_string());
            let _ = writeln!(text, "criterion {predicate}\ndirect {verdict}");
            single = json!({ "first": auto_json(g, a), "second": auto_json(g, b), "predicate": predicate, "oracle": oracle });
        }
        if oracle.is_some_and(|o| o != predicate) {
            let _ = writeln!(text, "DISAGREEMENT {} vs {}", auto_text(g, a), auto_text(g, b));
            let images = transcript(g, a, b, &mut text)?;
            disagreements.push(json!({
                "first": auto_json(g, a), "second": auto_json(g, b), "predicate": predicate, "oracle": oracle, "images": images,
            }));
        }
    }
    if args.all {
        let _ = writeln!(text, "{} pairs, {agree} agree, {} disagree, {unknown} unknown", pairs.len(), disagreements.len());
    }
    let failed = !disagreements.is_empty() || unknown > 0;
    let results = json!({
        "pairs": pairs.len(),
        "agree": agree,
        "unknown": unknown,
        "disagreements": disagreements,
        "pair": single,
    });
    let parameters = [("all", json!(args.all)), ("bound", json!(global.bound))];
    Ok(Body::new(parameters, results, text).failed_if(failed))
}

fn spine(global: &GlobalArgs, g: &SimplicialGraph, args: &SpineArgs) -> Result<Body, CliError> {
    let census = args.census || !(args.collapse || args.dot);
    let mut text = String::new();
    let mut results = serde_json::Map::new();
    if census || args.dot {
        let star = build_star(g, CompatMode::Weak, args.max_collections).map_err(compute)?;
        if census {
            let counts = star.census();
            for (k, c) in counts.iter().enumerate() {
                let _ = writeln!(text, "dimension {k}: {c} cubes");
            }
            let _ = writeln!(text, "{} collections, top dimension {}", star.collections.len(), star.top_dimension);
            results.insert("census".into(), json!(counts));
            results.insert("collections".into(), json!(star.collections.len()));
            results.insert("top_dimension".into(), json!(star.top_dimension));
        }
        if args.dot {
            let dot = star.to_dot(g);
            text.push_str(&dot);
            results.insert("dot".into(), json!(dot));
        }
    }
    if args.collapse {
        let report = collapse_pass(g, global.budget).map_err(compute)?;
        let mut removed: BTreeMap<String, usize> = BTreeMap::new();
        for pair in &report.removed_pairs {
            *removed.entry(part_text(g, &pair.removed)).or_default() += 1;
        }
        let _ = writeln!(
            text,
            "collapse: {} top cubes of dimension {} removed, residual dimension {}",
            report.removed_pairs.len(),
            report.top_dimension,
            report.residual_dimension
        );
        for (p, count) in &removed {
            let _ = writeln!(text, "  {count} x {p}");
        }
        results.insert(
            "collapse".into(),
            json!({
                "top_dimension": report.top_dimension,
                "removed_pairs": report.removed_pairs.len(),
                "residual_dimension": report.residual_dimension,
                "removed_partitions": removed,
            }),
        );
    }
    let parameters = [
        ("census", json!(census)),
        ("collapse", json!(args.collapse)),
        ("dot", json!(args.dot)),
        ("mode", json!("weak")),
        ("max_collections", json!(args.max_collections)),
        ("budget", json!(global.budget)),
    ];
    Ok(Body::new(parameters, Value::Object(results), text))
}

fn verify(global: &GlobalArgs, args: &VerifyArgs) -> Body {
    let cfg = SuiteConfig { seed: global.seed, budget: global.budget, bound: global.bound };
    // Text mode streams results so long checks show progress.
    let stream = !global.json;
    let results = suite::run(&cfg, |r| {
        if stream {
            println!("{}", check_line(r, global.timing));
        }
    });
    let passed = results.iter().filter(|r| r.passed()).count();
    let failed = results.len() - passed;
    let checks: Vec<Value> = results
        .iter()
        .map(|r| {
            let mut entry = json!({ "index": r.index, "name": r.name, "passed": r.passed(), "failure": r.failure });
            if global.timing {
                entry["elapsed_ms"] = json!(r.elapsed.as_secs_f64() * 1e3);
            }
            entry
        })
        .collect();
    let text = format!("{passed} passed, {failed} failed\n");
    let parameters = [
        ("suite", json!(format!("{:?}", args.suite).to_lowercase())),
        ("seed", json!(global.seed)),
        ("bound", json!(global.bound)),
        ("budget", json!(global.budget)),
    ];
    let results = json!({ "checks": checks, "passed": passed, "failed": failed });
    Body::new(parameters, results, text).failed_if(failed > 0)
}

fn check_line(r: &suite::CheckResult, timing: bool) -> String {
    let status = if r.passed() { "PASS" } else { "FAIL" };
    let mut line = format!("{status} {:>2} {}", r.index, r.name);
    if timing {
        let _ = write!(line, " ({:.2?})", r.elapsed);
    }
    if let Some(msg) = &r.failure {
        let _ = write!(line, ": {msg}");
    }
    line
}
