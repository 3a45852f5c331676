//! Elementary deformations (collapse, expansion, slide, sign changes), move
//! scripts, greedy reduction and small-instance isomorphism.

mod iso;

pub use iso::{isomorphic, isomorphic_with, IsoMode, IsoWitness};

use serde::{Deserialize, Serialize};

use crate::error::{GbsError, GbsResult};
use crate::graph_core::{EdgeSpec, LabeledGraph, SignChange, REVERSE_PREFIX};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "camelCase")]
pub enum Move {
    /// Merges the terminus of `edge` into its origin; needs `|λ(~edge)| = 1`.
    Collapse { edge: String },
    #[serde(rename_all = "camelCase")]
    Expand {
        vertex: String,
        half_edges: Vec<String>,
        n: i64,
        sign: i64,
        new_vertex: String,
        new_edge: String,
    },
    #[serde(rename_all = "camelCase")]
    Slide { half_edge: String, along: String },
    VertexSignChange { vertex: String },
    EdgeSignChange { edge: String },
}

impl From<SignChange> for Move {
    fn from(s: SignChange) -> Move {
        match s {
            SignChange::Vertex(vertex) => Move::VertexSignChange { vertex },
            SignChange::Edge(edge) => Move::EdgeSignChange { edge },
        }
    }
}

impl Move {
    pub fn apply(&self, g: &LabeledGraph) -> GbsResult<LabeledGraph> {
        match self {
            Move::Collapse { edge } => collapse(g, edge),
            Move::Expand { vertex, half_edges, n, sign, new_vertex, new_edge } => {
                let hs: Vec<&str> = half_edges.iter().map(String::as_str).collect();
                expand(g, vertex, &hs, *n, *sign, new_vertex, new_edge)
            }
            Move::Slide { half_edge, along } => slide(g, half_edge, along),
            Move::VertexSignChange { vertex } => g.vertex_sign_change(vertex),
            Move::EdgeSignChange { edge } => g.edge_sign_change(edge),
        }
    }
}

pub type MoveScript = Vec<Move>;

fn checked_mul(a: i64, b: i64, what: &str) -> GbsResult<i64> {
    a.checked_mul(b).ok_or_else(|| GbsError::Overflow(format!("label product in {what}")))
}

/// Sets the origin of a half-edge (by name) inside an edge list.
fn reroot(specs: &mut [EdgeSpec], half: &str, vertex: &str, label: i64) {
    let (id, forward) = match half.strip_prefix(REVERSE_PREFIX) {
        Some(id) => (id, false),
        None => (half, true),
    };
    let spec = specs.iter_mut().find(|s| s.id == id).expect("half-edge exists");
    if forward {
        spec.from = vertex.to_string();
        spec.label_from = label;
    } else {
        spec.to = vertex.to_string();
        spec.label_to = label;
    }
}

pub fn collapse(g: &LabeledGraph, edge: &str) -> GbsResult<LabeledGraph> {
    let e = g.require_half_edge(edge)?;
    if g.is_loop(e) {
        return Err(GbsError::Move(format!("cannot collapse loop {edge}")));
    }
    let (le, lr) = (g.label(e), g.label(e.reverse()));
    if lr.abs() != 1 {
        return Err(GbsError::Move(format!("collapse requires ±1 label at the terminus of {edge}, found {lr}")));
    }
    let x = g.vertex_name(g.origin(e)).to_string();
    let y = g.vertex_name(g.terminus(e)).to_string();
    let factor = le * lr;
    let (vertices, specs) = g.to_specs();
    let id = &g.edges()[e.edge()].id;
    let mut out_specs = Vec::with_capacity(specs.len() - 1);
    for mut s in specs.into_iter().filter(|s| &s.id != id) {
        if s.from == y {
            s.from = x.clone();
            s.label_from = checked_mul(s.label_from, factor, "collapse")?;
        }
        if s.to == y {
            s.to = x.clone();
            s.label_to = checked_mul(s.label_to, factor, "collapse")?;
        }
        out_specs.push(s);
    }
    let vertices: Vec<String> = vertices.into_iter().filter(|v| *v != y).collect();
    LabeledGraph::new(&vertices, &out_specs)
}

pub fn expand(
    g: &LabeledGraph,
    vertex: &str,
    half_edges: &[&str],
    n: i64,
    sign: i64,
    new_vertex: &str,
    new_edge: &str,
) -> GbsResult<LabeledGraph> {
    let x = g.require_vertex(vertex)?;
    if n == 0 {
        return Err(GbsError::Move("expand requires n != 0".into()));
    }
    if sign != 1 && sign != -1 {
        return Err(GbsError::Move(format!("expand requires sign ±1, found {sign}")));
    }
    let divisor = sign * n;
    let mut moved = Vec::new();
    for &name in half_edges {
        let h = g.require_half_edge(name)?;
        if g.origin(h) != x {
            return Err(GbsError::Move(format!("half-edge {name} does not start at {vertex}")));
        }
        if moved.iter().any(|(m, _)| *m == name) {
            return Err(GbsError::Move(format!("half-edge {name} listed twice")));
        }
        let l = g.label(h);
        if l % divisor != 0 {
            return Err(GbsError::Move(format!("label {l} of half-edge {name} is not divisible by {divisor}")));
        }
        moved.push((name, l / divisor));
    }
    let (mut vertices, mut specs) = g.to_specs();
    for (name, l) in moved {
        reroot(&mut specs, name, new_vertex, l);
    }
    vertices.push(new_vertex.to_string());
    specs.push(EdgeSpec::new(new_edge, vertex, new_vertex, n, sign));
    LabeledGraph::new(&vertices, &specs)
}

pub fn slide(g: &LabeledGraph, half_edge: &str, along: &str) -> GbsResult<LabeledGraph> {
    let h = g.require_half_edge(half_edge)?;
    let f = g.require_half_edge(along)?;
    if h.edge() == f.edge() {
        return Err(GbsError::Move(format!("cannot slide {half_edge} along its own edge")));
    }
    if g.origin(h) != g.terminus(f) {
        return Err(GbsError::Move(format!("{half_edge} does not start at the terminus of {along}")));
    }
    let (lh, lf, lr) = (g.label(h), g.label(f), g.label(f.reverse()));
    if lh % lr != 0 {
        return Err(GbsError::Move(format!("label {lh} of {half_edge} is not divisible by {lr}")));
    }
    let new_label = checked_mul(lh / lr, lf, "slide")?;
    let target = g.vertex_name(g.origin(f)).to_string();
    let (vertices, mut specs) = g.to_specs();
    reroot(&mut specs, half_edge, &target, new_label);
    LabeledGraph::new(&vertices, &specs)
}

pub fn apply_script(g: &LabeledGraph, script: &[Move]) -> GbsResult<LabeledGraph> {
    let mut cur = g.clone();
    for (index, m) in script.iter().enumerate() {
        cur = m.apply(&cur).map_err(|e| GbsError::Script { index, source: Box::new(e) })?;
    }
    Ok(cur)
}

pub fn parse_script(text: &str) -> GbsResult<MoveScript> {
    serde_json::from_str(text).map_err(|e| GbsError::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })
}

pub fn serialize_script(script: &[Move]) -> String {
    let mut s = serde_json::to_string_pretty(script).expect("moves serialize");
    s.push('\n');
    s
}

/// Half-edges whose collapse is legal: non-loops with `±1` at the terminus.
pub fn collapsible(g: &LabeledGraph) -> Vec<String> {
    let mut names: Vec<String> = g
        .half_edges()
        .filter(|&h| !g.is_loop(h) && g.label(h.reverse()).abs() == 1)
        .map(|h| g.half_edge_name(h))
        .collect();
    names.sort();
    names
}

/// Greedy collapse of the lexicographically smallest collapsible half-edge,
/// repeated until none is left. Returns the final graph and the moves made.
pub fn reduce_with_log(g: &LabeledGraph) -> GbsResult<(LabeledGraph, MoveScript)> {
    let mut cur = g.clone();
    let mut log = Vec::new();
    while let Some(name) = collapsible(&cur).into_iter().next() {
        let m = Move::Collapse { edge: name };
        cur = m.apply(&cur)?;
        log.push(m);
    }
    Ok((cur, log))
}

pub fn reduce(g: &LabeledGraph) -> GbsResult<LabeledGraph> {
    Ok(reduce_with_log(g)?.0)
}

/// The move script taking the `H2(k,n)` cover graph to its one-vertex form
/// `BS(1,n²) ∨ (k-1)·BS(1,1) ∨ b(k-1)·BS(c,c)`: collapse every edge above
/// `e_k`, then slide the `n²` ends of `k-1` loops above `e0` along a fixed one.
pub fn h2_script(k: i64, n: i64) -> MoveScript {
    let b = num_integer::gcd(k, n);
    let a = k / b;
    let mut script = Vec::new();
    for i in 1..=b {
        script.push(Move::Collapse { edge: format!("{REVERSE_PREFIX}e{k}_{i}") });
    }
    let anchor = "e0_1_1".to_string();
    for i in 1..=b {
        for s in 1..=a {
            let id = format!("e0_{i}_{s}");
            if id != anchor {
                script.push(Move::Slide { half_edge: format!("{REVERSE_PREFIX}{id}"), along: anchor.clone() });
            }
        }
    }
    script
}

/// The script taking the `H2(2,2)` cover graph to four loops with labels
/// `(1,4)` and `(4,1)`, the cover graph of an index-4 subgroup of `BS(4,16)`.
pub fn easycase_script() -> MoveScript {
    let mut script = Vec::new();
    for i in 1..=2 {
        script.push(Move::Collapse { edge: format!("{REVERSE_PREFIX}e2_{i}") });
    }
    for i in 1..=2 {
        script.push(Move::Slide { half_edge: format!("e1_{i}"), along: format!("{REVERSE_PREFIX}e0_{i}_1") });
    }
    script
}

/// The script taking the `G3(k,n,p)` graph to the one-vertex form
/// `BS(1,n²) ∨ (k-1)·BS(1,1) ∨ (k-p-1)·BS(n,n) ∨ BS(pn,pn)`.
pub fn g3_script(k: i64) -> MoveScript {
    let mut script = vec![Move::Collapse { edge: format!("{REVERSE_PREFIX}f1") }];
    for j in 2..=k {
        script.push(Move::Slide { half_edge: format!("{REVERSE_PREFIX}e{j}"), along: "e1".into() });
    }
    script
}

/// The script taking the `G4(k,n)` graph to `BS(1,n²) ∨ (l+k-1)·BS(1,1)`,
/// `l = (k-1)/n`.
pub fn g4_script(k: i64, n: i64) -> MoveScript {
    let mut script = vec![Move::Collapse { edge: format!("{REVERSE_PREFIX}f0") }];
    for j in 2..=k {
        script.push(Move::Slide { half_edge: format!("{REVERSE_PREFIX}e{j}"), along: "e1".into() });
    }
    for i in 1..=(k - 1) / n {
        script.push(Move::Slide { half_edge: format!("f{i}"), along: "e1".into() });
        script.push(Move::Slide { half_edge: format!("{REVERSE_PREFIX}f{i}"), along: "e1".into() });
    }
    script
}
