use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gbs_core::bass_serre::{build_ball, build_metric_ball, ComplexBall};
use gbs_core::cayley::{build_delta, ColorClass};
use gbs_core::covering::{covering_index, validate_covering};
use gbs_core::deform::{apply_script, isomorphic, parse_script, reduce_with_log, serialize_script, IsoMode};
use gbs_core::depth::{truncated_profile, wedge_profile, wedge_profile_of_graph};
use gbs_core::graph_core::{
    certify_non_elementary, make_example, orientation_character_trivial, parse_covering, parse_document,
    serialize_covering, serialize_document, serialize_graph, Decorations, Family, GraphDocument,
};
use gbs_core::lattice::{
    check_lattice_char, check_lattice_prop, find_directed_structure, find_length_function, is_discrete,
    LatticeParams, LengthSearch,
};
use gbs_core::profiles::{
    compare_profiles, comparison_to_json, equivalent_truncated, parse_profile, symbolic_to_json,
    truncated_to_json, AnyProfile, DEFAULT_WITNESS_BOUND,
};
use gbs_core::repro::{repro_easycase, repro_g3, repro_g4, repro_mainthm, ReproReport};
use gbs_core::{DirectedStructure, GbsError, LabeledGraph};

#[derive(Parser)]
#[command(name = "gbs", version, about = "Toolkit for generalized Baumslag-Solitar groups")]
struct Cli {
    /// Print a machine-readable JSON verdict.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a labeled graph file.
    Validate {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Apply a move script (or greedy collapses) to a graph.
    Deform {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, conflicts_with = "reduce")]
        script: Option<PathBuf>,
        /// Collapse greedily instead of running a script.
        #[arg(long)]
        reduce: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Check the result against this graph.
        #[arg(long)]
        target: Option<PathBuf>,
        /// Compare with the target up to sign changes.
        #[arg(long)]
        up_to_sign: bool,
    },
    /// Depth profiles: truncated enumeration or closed form.
    Depth {
        #[arg(long, value_enum, default_value = "truncated")]
        mode: DepthMode,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        base: Option<String>,
        #[arg(long, default_value_t = 8)]
        maxlen: usize,
        #[arg(long = "N")]
        big_n: Option<u128>,
        #[arg(long, value_delimiter = ',')]
        divisors: Vec<u128>,
    },
    /// Compare two profile files.
    Compare {
        #[arg(long)]
        p1: PathBuf,
        #[arg(long)]
        p2: PathBuf,
        #[arg(long, default_value_t = DEFAULT_WITNESS_BOUND)]
        bound: u128,
    },
    /// Branched coverings.
    Cover {
        #[command(subcommand)]
        command: CoverCommand,
    },
    /// Lattice conditions for X_{m,n}.
    Lattice {
        #[command(subcommand)]
        command: LatticeCommand,
    },
    /// Build a finite ball of the complex.
    Ball {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        base: Option<String>,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        /// Line window half-width; omit for a metric ball.
        #[arg(long)]
        width: Option<i64>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Build the graph Δ on one vertex orbit of a ball.
    Cayley {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, default_value_t = 6)]
        radius: usize,
        /// Line window half-width; omit for a metric ball.
        #[arg(long)]
        width: Option<i64>,
        #[arg(long, default_value = "white")]
        class: String,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Reproduce a comparison end to end.
    Repro {
        #[command(subcommand)]
        command: ReproCommand,
    },
    /// Write a named example graph (or covering, for h2cover).
    Example {
        family: String,
        params: Vec<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DepthMode {
    Truncated,
    Closed,
    Wedge,
}

#[derive(Subcommand)]
enum CoverCommand {
    Verify { covering: PathBuf },
    Index { covering: PathBuf },
}

#[derive(Subcommand)]
enum LatticeCommand {
    Check {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        /// `auto` searches for a directed structure; default uses the file's.
        #[arg(long)]
        dir: Option<String>,
        /// `auto` searches for a length function and checks the characterization.
        #[arg(long)]
        ell: Option<String>,
    },
    Discrete {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Subcommand)]
enum ReproCommand {
    Mainthm {
        #[arg(long, default_value_t = 4)]
        k: i64,
        #[arg(long, default_value_t = 6)]
        n: i64,
    },
    Easycase,
    G3 {
        #[arg(long, default_value_t = 5)]
        k: i64,
        #[arg(long, default_value_t = 4)]
        n: i64,
        #[arg(long, default_value_t = 2)]
        p: i64,
    },
    G4 {
        #[arg(long, default_value_t = 5)]
        k: i64,
        #[arg(long, default_value_t = 2)]
        n: i64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Pass,
    Fail,
    Unknown,
}

impl Verdict {
    fn code(self) -> u8 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Unknown => 2,
        }
    }
}

struct Report {
    verdict: Verdict,
    json: Value,
    summary: String,
}

enum CliError {
    /// Unreadable or malformed input files.
    Input(String),
    Lib(GbsError),
}

impl From<GbsError> for CliError {
    fn from(e: GbsError) -> Self {
        match e {
            GbsError::Parse { .. } => CliError::Input(e.to_string()),
            e => CliError::Lib(e),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn load_document(path: &Path) -> CliResult<GraphDocument> {
    Ok(parse_document(&read(path)?)?)
}

fn graph_json(g: &LabeledGraph) -> Value {
    serde_json::from_str(&serialize_graph(g)).expect("serialized graph is JSON")
}

fn plus_names(g: &LabeledGraph, d: &DirectedStructure) -> Vec<String> {
    d.plus_half_edges().iter().map(|&h| g.half_edge_name(h)).collect()
}

/// The file's directed structure, or every reverse half-edge plus.
fn plus_or_default(doc: &GraphDocument) -> DirectedStructure {
    doc.plus
        .clone()
        .unwrap_or_else(|| DirectedStructure::from_forward_flags(vec![false; doc.graph.edge_count()]))
}

fn pass_fail(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn run(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::Validate { graph } => validate(graph),
        Command::Deform { graph, script, reduce, out, target, up_to_sign } => {
            deform(graph, script.as_deref(), *reduce, out.as_deref(), target.as_deref(), *up_to_sign)
        }
        Command::Depth { mode, graph, base, maxlen, big_n, divisors } => {
            depth(*mode, graph.as_deref(), base.as_deref(), *maxlen, *big_n, divisors)
        }
        Command::Compare { p1, p2, bound } => compare(p1, p2, *bound),
        Command::Cover { command } => cover(command),
        Command::Lattice { command } => lattice(command),
        Command::Ball { graph, base, radius, width, dot } => ball(graph, base.as_deref(), *radius, *width, dot.as_deref()),
        Command::Cayley { graph, m, n, radius, width, class, dot } => {
            cayley(graph, *m, *n, *radius, *width, class, dot.as_deref())
        }
        Command::Repro { command } => repro(command),
        Command::Example { family, params, out } => example(family, params, out.as_deref()),
    }
}

fn validate(path: &Path) -> CliResult<Report> {
    let doc = load_document(path)?;
    let g = &doc.graph;
    let report = g.validate();
    let violations: Vec<String> = report.violations.iter().map(|v| format!("{v:?}")).collect();
    if !report.is_valid() {
        return Ok(Report {
            verdict: Verdict::Fail,
            json: json!({ "status": "invalid", "violations": violations }),
            summary: format!("invalid graph: {}", violations.join("; ")),
        });
    }
    let orientable = orientation_character_trivial(g)?;
    let cert = certify_non_elementary(g)?;
    Ok(Report {
        verdict: Verdict::Pass,
        json: json!({
            "status": "valid",
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
            "rank": g.rank(),
            "orientationCharacterTrivial": orientable,
            "nonElementaryCertified": cert.certified,
            "nonElementaryReason": cert.reason,
        }),
        summary: format!(
            "valid graph: {} vertices, {} edges, rank {}; orientation character {}; {}",
            g.vertex_count(),
            g.edge_count(),
            g.rank(),
            if orientable { "trivial" } else { "nontrivial" },
            cert.reason
        ),
    })
}

fn deform(
    graph: &Path,
    script: Option<&Path>,
    reduce: bool,
    out: Option<&Path>,
    target: Option<&Path>,
    up_to_sign: bool,
) -> CliResult<Report> {
    let g = load_document(graph)?.graph;
    let (result, moves) = match (script, reduce) {
        (Some(s), _) => {
            let moves = parse_script(&read(s)?)?;
            (apply_script(&g, &moves)?, moves)
        }
        (None, true) => reduce_with_log(&g)?,
        (None, false) => return Err(CliError::Input("pass --script FILE or --reduce".into())),
    };
    if let Some(o) = out {
        write(o, &serialize_graph(&result))?;
    }
    let mut json = json!({
        "moves": serde_json::from_str::<Value>(&serialize_script(&moves)).expect("script is JSON"),
        "graph": graph_json(&result),
    });
    let mut verdict = Verdict::Pass;
    let mut summary = format!("{} moves applied; result has {} vertices, {} edges", moves.len(), result.vertex_count(), result.edge_count());
    if let Some(t) = target {
        let tg = load_document(t)?.graph;
        let mode = if up_to_sign { IsoMode::UpToSignChange } else { IsoMode::Exact };
        let iso = isomorphic(&result, &tg, mode)?;
        json["isomorphicToTarget"] = json!(iso.is_some());
        if let Some(w) = &iso {
            json["witness"] = json!({ "vertices": w.vertices, "halfEdges": w.half_edges });
        }
        verdict = pass_fail(iso.is_some());
        summary.push_str(if iso.is_some() { "; isomorphic to the target" } else { "; not isomorphic to the target" });
    }
    Ok(Report { verdict, json, summary })
}

fn depth(
    mode: DepthMode,
    graph: Option<&Path>,
    base: Option<&str>,
    maxlen: usize,
    big_n: Option<u128>,
    divisors: &[u128],
) -> CliResult<Report> {
    let need_graph = || graph.ok_or_else(|| CliError::Input("--graph is required for this mode".into()));
    match mode {
        DepthMode::Truncated => {
            let doc = load_document(need_graph()?)?;
            let base = match base {
                Some(b) => b.to_string(),
                None => doc.graph.vertices().first().cloned().unwrap_or_default(),
            };
            let p = truncated_profile(&doc.graph, &base, maxlen)?;
            Ok(Report {
                verdict: Verdict::Pass,
                json: truncated_to_json(&p),
                summary: format!("lower bound for the profile at `{base}` from paths of length <= {maxlen}"),
            })
        }
        DepthMode::Closed => {
            let n = big_n.ok_or_else(|| CliError::Input("--N is required in closed mode".into()))?;
            let p = wedge_profile(n, divisors)?;
            Ok(Report { verdict: Verdict::Pass, json: symbolic_to_json(&p), summary: "closed form".into() })
        }
        DepthMode::Wedge => {
            let doc = load_document(need_graph()?)?;
            let p = wedge_profile_of_graph(&doc.graph)?;
            Ok(Report { verdict: Verdict::Pass, json: symbolic_to_json(&p), summary: "closed form of the wedge".into() })
        }
    }
}

fn compare(p1: &Path, p2: &Path, bound: u128) -> CliResult<Report> {
    let a = parse_profile(&read(p1)?)?;
    let b = parse_profile(&read(p2)?)?;
    let truncate = |p: &AnyProfile, top: u128| match p {
        AnyProfile::Truncated(t) => Ok(t.clone()),
        AnyProfile::Symbolic(s) => gbs_core::depth::TruncatedProfile::new(s.elements_up_to(top), 0),
    };
    match (&a, &b) {
        (AnyProfile::Symbolic(x), AnyProfile::Symbolic(y)) => {
            let c = compare_profiles(x, y, bound);
            let json = comparison_to_json(&c);
            let verdict = match c {
                gbs_core::profiles::Comparison::Unknown { .. } => Verdict::Unknown,
                _ => Verdict::Pass,
            };
            let summary = json["status"].as_str().unwrap_or_default().to_string();
            Ok(Report { verdict, json, summary })
        }
        _ => {
            let top = [&a, &b]
                .iter()
                .filter_map(|p| match p {
                    AnyProfile::Truncated(t) => Some(t.max()),
                    AnyProfile::Symbolic(_) => None,
                })
                .min()
                .unwrap_or(1);
            let (x, y) = (truncate(&a, top)?, truncate(&b, top)?);
            let caveat = "truncated profiles: a missing witness does not prove inequivalence";
            Ok(match equivalent_truncated(&x, &y, bound) {
                Some((r, r2)) => Report {
                    verdict: Verdict::Pass,
                    json: json!({ "status": "Equivalent", "witness": { "r": r as u64, "rPrime": r2 as u64 }, "caveat": caveat }),
                    summary: format!("S1/{r} and S2/{r2} agree on their common range ({caveat})"),
                },
                None => Report {
                    verdict: Verdict::Unknown,
                    json: json!({ "status": "NoneFound", "bound": bound as u64, "caveat": caveat }),
                    summary: format!("no witness with r, r' <= {bound} ({caveat})"),
                },
            })
        }
    }
}

fn cover(command: &CoverCommand) -> CliResult<Report> {
    match command {
        CoverCommand::Verify { covering } => {
            let c = parse_covering(&read(covering)?)?;
            let r = validate_covering(&c)?;
            let v: Vec<Value> =
                r.violations.iter().map(|v| json!({ "condition": v.condition, "message": v.message })).collect();
            Ok(Report {
                verdict: pass_fail(r.is_valid()),
                summary: if r.is_valid() {
                    "admissible covering".into()
                } else {
                    format!("{} violations", v.len())
                },
                json: json!({ "valid": r.is_valid(), "violations": v }),
            })
        }
        CoverCommand::Index { covering } => {
            let c = parse_covering(&read(covering)?)?;
            let i = covering_index(&c)?;
            Ok(Report { verdict: Verdict::Pass, json: json!({ "index": i }), summary: format!("index {i}") })
        }
    }
}

fn lattice(command: &LatticeCommand) -> CliResult<Report> {
    match command {
        LatticeCommand::Discrete { m, n } => {
            let d = is_discrete(*m, *n)?;
            Ok(Report {
                verdict: Verdict::Pass,
                json: json!({ "m": m, "n": n, "discrete": d }),
                summary: format!("Aut(X_{{{m},{n}}}) is {}discrete", if d { "" } else { "not " }),
            })
        }
        LatticeCommand::Check { graph, m, n, dir, ell } => {
            let doc = load_document(graph)?;
            let g = &doc.graph;
            let p = LatticeParams::new(*m, *n)?;
            let d = match dir.as_deref() {
                Some("auto") => find_directed_structure(g, p)?,
                Some(other) => {
                    let names: Vec<&str> = other.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
                    Some(DirectedStructure::from_plus_names(g, &names)?)
                }
                None => match &doc.plus {
                    Some(d) => Some(d.clone()),
                    None => find_directed_structure(g, p)?,
                },
            };
            let Some(d) = d else {
                return Ok(Report {
                    verdict: Verdict::Fail,
                    json: json!({ "holds": false, "violations": [{ "condition": "i1/i2", "message": "no directed structure satisfies the conditions" }] }),
                    summary: "no directed structure satisfies the lattice conditions".into(),
                });
            };
            let r = check_lattice_prop(g, &d, p)?;
            let vio: Vec<Value> =
                r.violations.iter().map(|v| json!({ "condition": v.condition, "message": v.message })).collect();
            let mut json = json!({ "holds": r.holds(), "plus": plus_names(g, &d), "violations": vio });
            let mut verdict = pass_fail(r.holds());
            let mut summary = if r.holds() {
                format!("lattice conditions hold for X_{{{m},{n}}}")
            } else {
                format!("{} violations", r.violations.len())
            };
            if ell.as_deref() == Some("auto") {
                match find_length_function(g, &d, p)? {
                    LengthSearch::Found(l) => {
                        let c = check_lattice_char(g, &d, &l, p)?;
                        let cv: Vec<Value> =
                            c.violations.iter().map(|v| json!({ "condition": v.condition, "message": v.message })).collect();
                        let lengths: serde_json::Map<String, Value> = g
                            .vertices()
                            .iter()
                            .cloned()
                            .zip(l.vertex.iter().map(|&x| json!(x)))
                            .chain(g.edges().iter().map(|e| e.id.clone()).zip(l.edge.iter().map(|&x| json!(x))))
                            .collect();
                        json["characterization"] = json!({
                            "holds": c.holds(), "length": lengths, "violations": cv, "j3": c.j3, "j4": c.j4,
                        });
                        if !c.holds() {
                            verdict = Verdict::Fail;
                        }
                        summary.push_str(&format!("; characterization {}", if c.holds() { "holds" } else { "fails" }));
                    }
                    LengthSearch::Unknown { bound } => {
                        json["characterization"] = json!({ "status": "unknown", "bound": bound });
                        if verdict == Verdict::Pass {
                            verdict = Verdict::Unknown;
                        }
                        summary.push_str(&format!("; no length function with vertex lengths <= {bound}"));
                    }
                }
            }
            Ok(Report { verdict, json, summary })
        }
    }
}

fn make_ball(doc: &GraphDocument, plus: &DirectedStructure, base: &str, radius: usize, width: Option<i64>) -> CliResult<ComplexBall> {
    Ok(match width {
        Some(w) => build_ball(&doc.graph, plus, base, radius, w)?,
        None => build_metric_ball(&doc.graph, plus, base, radius)?,
    })
}

fn ball(graph: &Path, base: Option<&str>, radius: usize, width: Option<i64>, dot: Option<&Path>) -> CliResult<Report> {
    let doc = load_document(graph)?;
    let plus = plus_or_default(&doc);
    let base = base.map(str::to_string).unwrap_or_else(|| doc.graph.vertices().first().cloned().unwrap_or_default());
    let b = make_ball(&doc, &plus, &base, radius, width)?;
    if let Some(d) = dot {
        write(d, &b.to_dot())?;
    }
    let bad = b.check_invariants();
    let params = b.params.map(|p| json!({ "m": p.m, "n": p.n }));
    Ok(Report {
        verdict: pass_fail(bad.is_empty()),
        summary: format!(
            "{} points, {} horizontal and {} vertical edges, {} cells; {} invariant violations",
            b.points.len(),
            b.horizontal.len(),
            b.vertical.len(),
            b.cells.len(),
            bad.len()
        ),
        json: json!({
            "points": b.points.len(),
            "treeNodes": b.nodes.len(),
            "horizontalEdges": b.horizontal.len(),
            "verticalEdges": b.vertical.len(),
            "cells": b.cells.len(),
            "params": params,
            "violations": bad,
        }),
    })
}

fn cayley(
    graph: &Path,
    m: Option<u64>,
    n: Option<u64>,
    radius: usize,
    width: Option<i64>,
    class: &str,
    dot: Option<&Path>,
) -> CliResult<Report> {
    let doc = load_document(graph)?;
    let class = ColorClass::parse(class)?;
    let plus = match (m, n) {
        (Some(m), Some(n)) => {
            let p = LatticeParams::new(m, n)?;
            match find_directed_structure(&doc.graph, p)? {
                Some(d) => d,
                None => {
                    return Err(CliError::Lib(GbsError::Refused(format!(
                        "graph is not lattice-certified for X_{{{m},{n}}}"
                    ))))
                }
            }
        }
        (None, None) => plus_or_default(&doc),
        _ => return Err(CliError::Input("pass both --m and --n or neither".into())),
    };
    let base = class.vertex_name();
    let b = make_ball(&doc, &plus, base, radius, width)?;
    let d = build_delta(&b, base)?;
    if let Some(p) = dot {
        write(p, &d.to_dot())?;
    }
    let degrees: Vec<usize> = d.interior_degrees().into_iter().collect();
    let inner = d.interior.iter().filter(|&&x| x).count();
    let verdict = if inner == 0 {
        Verdict::Unknown
    } else {
        pass_fail(degrees.len() == 1 && d.interior_connected())
    };
    Ok(Report {
        verdict,
        summary: format!(
            "Δ has {} vertices and {} edges; C = {}; {inner} interior vertices with degrees {degrees:?}",
            d.len(),
            d.edge_count(),
            d.c
        ),
        json: json!({
            "vertices": d.len(),
            "edges": d.edge_count(),
            "c": d.c,
            "interiorRadius": d.interior_radius,
            "interiorVertices": inner,
            "interiorDegrees": degrees,
            "interiorConnected": d.interior_connected(),
            "rootCertifiedRadius": d.certified_radius(d.root),
        }),
    })
}

fn repro(command: &ReproCommand) -> CliResult<Report> {
    let r: ReproReport = match command {
        ReproCommand::Mainthm { k, n } => repro_mainthm(*k, *n)?,
        ReproCommand::Easycase => repro_easycase()?,
        ReproCommand::G3 { k, n, p } => repro_g3(*k, *n, *p)?,
        ReproCommand::G4 { k, n } => repro_g4(*k, *n)?,
    };
    let mut lines = vec![r.pipeline.clone()];
    for s in &r.steps {
        lines.push(format!("  [{}] {}: {}", if s.passed { "ok" } else { "FAIL" }, s.name, s.detail));
    }
    if let Some(c) = &r.comparison {
        lines.push(format!("verdict: {}", comparison_to_json(c)["status"].as_str().unwrap_or_default()));
    }
    Ok(Report { verdict: pass_fail(r.passed()), json: r.to_json(), summary: lines.join("\n") })
}

fn example(family: &str, params: &[i64], out: Option<&Path>) -> CliResult<Report> {
    let f = Family::parse(family, params)?;
    let ex = make_example(f)?;
    let text = match &ex.covering {
        Some(c) => serialize_covering(c),
        None => serialize_document(&GraphDocument { graph: ex.graph.clone(), plus: ex.plus.clone(), decorations: Decorations::default() }),
    };
    if let Some(o) = out {
        write(o, &text)?;
    }
    let json: Value = serde_json::from_str(&text).expect("serialized example is JSON");
    Ok(Report { verdict: Verdict::Pass, summary: text.trim_end().to_string(), json })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(r) => {
            if cli.json || matches!(cli.command, Command::Depth { .. }) {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("JSON value serializes"));
            } else {
                println!("{}", r.summary);
            }
            ExitCode::from(r.verdict.code())
        }
        Err(err) => {
            let (code, kind, message) = match err {
                CliError::Input(m) => (3, "input", m),
                CliError::Lib(e @ (GbsError::Refused(_) | GbsError::Guard(_))) => (2, "undecided", e.to_string()),
                CliError::Lib(e) => (1, "error", e.to_string()),
            };
            if cli.json {
                println!("{}", json!({ "status": "error", "kind": kind, "message": message }));
            } else {
                eprintln!("gbs: {message}");
            }
            ExitCode::from(code)
        }
    }
}
