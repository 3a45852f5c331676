//! Labeled graphs: half-edges with a free involution, an origin map and
//! nonzero integer labels.

mod elementary;
mod examples;
mod io;
mod signs;

pub use elementary::{certify_non_elementary, NonElementary};
pub use examples::{bs_vertex_cover, make_example, wedge, Example, Family};
pub use io::{
    parse_covering, parse_document, parse_graph, serialize_covering, serialize_document,
    serialize_graph, Decorations, GraphDocument,
};
pub use signs::{make_labels_positive, orientation_character_trivial, SignChange, SignNormalization};

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{GbsError, GbsResult};

/// A half-edge handle. Edge record `i` owns half-edges `2i` (origin `from`)
/// and `2i + 1` (origin `to`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge(u32);

impl HalfEdge {
    pub fn new(edge: usize, forward: bool) -> HalfEdge {
        HalfEdge((edge as u32) * 2 + u32::from(!forward))
    }

    pub fn from_index(index: usize) -> HalfEdge {
        HalfEdge(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn edge(self) -> usize {
        (self.0 / 2) as usize
    }

    pub fn is_forward(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn reverse(self) -> HalfEdge {
        HalfEdge(self.0 ^ 1)
    }
}

/// Prefix marking the reverse half-edge of an edge record in textual ids.
pub const REVERSE_PREFIX: char = '~';

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub from: usize,
    pub to: usize,
    pub label_from: i64,
    pub label_to: i64,
}

/// Name-based edge description used to build graphs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeSpec {
    pub id: String,
    pub from: String,
    pub to: String,
    pub label_from: i64,
    pub label_to: i64,
}

impl EdgeSpec {
    pub fn new(id: &str, from: &str, to: &str, label_from: i64, label_to: i64) -> EdgeSpec {
        EdgeSpec {
            id: id.to_string(),
            from: from.to_string(),
            to: to.to_string(),
            label_from,
            label_to,
        }
    }
}

/// A finite graph with edge involution and integer labels. Vertices and edge
/// records are kept sorted by id, so equal graphs have equal indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    incidence: Vec<Vec<HalfEdge>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoVertices,
    ZeroLabel { half_edge: String },
    Disconnected { components: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NoVertices => write!(f, "graph has no vertices"),
            Violation::ZeroLabel { half_edge } => write!(f, "zero label on half-edge {half_edge}"),
            Violation::Disconnected { components } => {
                write!(f, "disconnected: {components} components")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl LabeledGraph {
    /// Builds a graph from names. Rejects duplicate ids, unknown endpoints and
    /// edge ids starting with the reverse prefix. Zero labels and
    /// disconnectedness are reported by [`LabeledGraph::validate`] instead.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[EdgeSpec]) -> GbsResult<LabeledGraph> {
        let mut names: Vec<String> = vertices.iter().map(|s| s.as_ref().to_string()).collect();
        names.sort();
        for w in names.windows(2) {
            if w[0] == w[1] {
                return Err(GbsError::DuplicateId(w[0].clone()));
            }
        }
        let mut sorted: Vec<&EdgeSpec> = edges.iter().collect();
        sorted.sort_by(|a, b| a.id.cmp(&b.id));
        for w in sorted.windows(2) {
            if w[0].id == w[1].id {
                return Err(GbsError::DuplicateId(w[0].id.clone()));
            }
        }
        let lookup = |name: &str| -> GbsResult<usize> {
            names
                .binary_search_by(|x| x.as_str().cmp(name))
                .map_err(|_| GbsError::UnknownVertex(name.to_string()))
        };
        let mut built = Vec::with_capacity(sorted.len());
        for spec in sorted {
            if spec.id.is_empty() || spec.id.starts_with(REVERSE_PREFIX) {
                return Err(GbsError::InvalidGraph(format!(
                    "edge id `{}` is empty or starts with `{REVERSE_PREFIX}`",
                    spec.id
                )));
            }
            if names.binary_search(&spec.id).is_ok() {
                return Err(GbsError::DuplicateId(spec.id.clone()));
            }
            built.push(Edge {
                id: spec.id.clone(),
                from: lookup(&spec.from)?,
                to: lookup(&spec.to)?,
                label_from: spec.label_from,
                label_to: spec.label_to,
            });
        }
        let mut incidence = vec![Vec::new(); names.len()];
        for (i, e) in built.iter().enumerate() {
            incidence[e.from].push(HalfEdge::new(i, true));
            incidence[e.to].push(HalfEdge::new(i, false));
        }
        for list in &mut incidence {
            list.sort();
        }
        Ok(LabeledGraph { vertices: names, edges: built, incidence })
    }

    /// Shorthand for tests and fixtures: `(id, from, to, labelAtFrom, labelAtTo)`.
    pub fn from_tuples(vertices: &[&str], edges: &[(&str, &str, &str, i64, i64)]) -> GbsResult<LabeledGraph> {
        let specs: Vec<EdgeSpec> =
            edges.iter().map(|&(id, f, t, a, b)| EdgeSpec::new(id, f, t, a, b)).collect();
        LabeledGraph::new(vertices, &specs)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.binary_search_by(|x| x.as_str().cmp(name)).ok()
    }

    pub fn require_vertex(&self, name: &str) -> GbsResult<usize> {
        self.vertex_index(name).ok_or_else(|| GbsError::UnknownVertex(name.to_string()))
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.binary_search_by(|e| e.id.as_str().cmp(id)).ok()
    }

    /// All half-edges in index order.
    pub fn half_edges(&self) -> impl Iterator<Item = HalfEdge> + '_ {
        (0..2 * self.edges.len()).map(HalfEdge::from_index)
    }

    pub fn origin(&self, h: HalfEdge) -> usize {
        let e = &self.edges[h.edge()];
        if h.is_forward() {
            e.from
        } else {
            e.to
        }
    }

    pub fn terminus(&self, h: HalfEdge) -> usize {
        self.origin(h.reverse())
    }

    pub fn label(&self, h: HalfEdge) -> i64 {
        let e = &self.edges[h.edge()];
        if h.is_forward() {
            e.label_from
        } else {
            e.label_to
        }
    }

    pub fn is_loop(&self, h: HalfEdge) -> bool {
        let e = &self.edges[h.edge()];
        e.from == e.to
    }

    /// Half-edges with origin `v`, sorted.
    pub fn incident(&self, v: usize) -> &[HalfEdge] {
        &self.incidence[v]
    }

    pub fn half_edge_name(&self, h: HalfEdge) -> String {
        let id = &self.edges[h.edge()].id;
        if h.is_forward() {
            id.clone()
        } else {
            format!("{REVERSE_PREFIX}{id}")
        }
    }

    pub fn half_edge_by_name(&self, name: &str) -> Option<HalfEdge> {
        match name.strip_prefix(REVERSE_PREFIX) {
            Some(id) => self.edge_index(id).map(|i| HalfEdge::new(i, false)),
            None => self.edge_index(name).map(|i| HalfEdge::new(i, true)),
        }
    }

    pub fn require_half_edge(&self, name: &str) -> GbsResult<HalfEdge> {
        self.half_edge_by_name(name).ok_or_else(|| GbsError::UnknownHalfEdge(name.to_string()))
    }

    /// Name-based description, the inverse of [`LabeledGraph::new`].
    pub fn to_specs(&self) -> (Vec<String>, Vec<EdgeSpec>) {
        let specs = self
            .edges
            .iter()
            .map(|e| EdgeSpec {
                id: e.id.clone(),
                from: self.vertices[e.from].clone(),
                to: self.vertices[e.to].clone(),
                label_from: e.label_from,
                label_to: e.label_to,
            })
            .collect();
        (self.vertices.clone(), specs)
    }

    /// Connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertices.len()];
        let mut out = Vec::new();
        for start in 0..self.vertices.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &h in self.incident(v) {
                    let w = self.terminus(h);
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.vertices.is_empty() {
            violations.push(Violation::NoVertices);
        }
        for h in self.half_edges() {
            if self.label(h) == 0 {
                violations.push(Violation::ZeroLabel { half_edge: self.half_edge_name(h) });
            }
        }
        let components = self.components().len();
        if components > 1 {
            violations.push(Violation::Disconnected { components });
        }
        ValidationReport { violations }
    }

    pub fn ensure_valid(&self) -> GbsResult<()> {
        let report = self.validate();
        match report.violations.first() {
            None => Ok(()),
            Some(v) => Err(GbsError::InvalidGraph(v.to_string())),
        }
    }

    /// Checks that consecutive steps are composable.
    pub fn check_path(&self, steps: &[HalfEdge]) -> GbsResult<()> {
        if steps.is_empty() {
            return Err(GbsError::NotACycle("empty path".into()));
        }
        for i in 1..steps.len() {
            if self.origin(steps[i]) != self.terminus(steps[i - 1]) {
                return Err(GbsError::BrokenPath(i));
            }
        }
        Ok(())
    }

    /// Exact product of `λ(e_i)/λ(ē_i)` over a closed path.
    pub fn path_modulus(&self, cycle: &[HalfEdge]) -> GbsResult<BigRational> {
        self.check_path(cycle)?;
        let first = cycle[0];
        let last = cycle[cycle.len() - 1];
        if self.terminus(last) != self.origin(first) {
            return Err(GbsError::NotACycle(format!(
                "path ends at {} but starts at {}",
                self.vertex_name(self.terminus(last)),
                self.vertex_name(self.origin(first))
            )));
        }
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for &h in cycle {
            let (a, b) = (self.label(h), self.label(h.reverse()));
            if a == 0 || b == 0 {
                return Err(GbsError::InvalidGraph(format!(
                    "zero label on edge {}",
                    self.edges[h.edge()].id
                )));
            }
            num *= a;
            den *= b;
        }
        Ok(BigRational::new(num, den))
    }

    /// Parses a whitespace- or comma-separated list of half-edge names.
    pub fn parse_path(&self, text: &str) -> GbsResult<Vec<HalfEdge>> {
        text.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| self.require_half_edge(s))
            .collect()
    }

    /// BFS spanning tree from vertex 0 in canonical order. Returns, per
    /// vertex, the tree half-edge pointing to it from its parent.
    pub fn spanning_tree(&self) -> Vec<Option<HalfEdge>> {
        let mut parent = vec![None; self.vertices.len()];
        if self.vertices.is_empty() {
            return parent;
        }
        let mut seen = vec![false; self.vertices.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &h in self.incident(v) {
                let w = self.terminus(h);
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(h);
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    /// Fundamental cycles of the canonical spanning tree, based at vertex 0,
    /// one per non-tree edge pair, in edge order.
    pub fn fundamental_cycles(&self) -> Vec<Vec<HalfEdge>> {
        let parent = self.spanning_tree();
        let tree_edges: BTreeSet<usize> = parent.iter().flatten().map(|h| h.edge()).collect();
        let path_from_root = |v: usize| -> Vec<HalfEdge> {
            let mut steps = Vec::new();
            let mut cur = v;
            while let Some(h) = parent[cur] {
                steps.push(h);
                cur = self.origin(h);
            }
            steps.reverse();
            steps
        };
        let mut cycles = Vec::new();
        for (i, _) in self.edges.iter().enumerate() {
            if tree_edges.contains(&i) {
                continue;
            }
            let h = HalfEdge::new(i, true);
            let mut cycle = path_from_root(self.origin(h));
            cycle.push(h);
            let back: Vec<HalfEdge> =
                path_from_root(self.terminus(h)).into_iter().rev().map(HalfEdge::reverse).collect();
            cycle.extend(back);
            cycles.push(cycle);
        }
        cycles
    }

    /// First Betti number of the underlying graph (assumes connected).
    pub fn rank(&self) -> usize {
        (self.edges.len() + 1).saturating_sub(self.vertices.len())
    }

    pub fn all_labels_positive(&self) -> bool {
        self.half_edges().all(|h| self.label(h) > 0)
    }

    /// Flips every label at `v` (both ends of loops at `v`).
    pub fn vertex_sign_change(&self, v: &str) -> GbsResult<LabeledGraph> {
        let vi = self.require_vertex(v)?;
        let mut g = self.clone();
        for e in &mut g.edges {
            if e.from == vi {
                e.label_from = -e.label_from;
            }
            if e.to == vi {
                e.label_to = -e.label_to;
            }
        }
        Ok(g)
    }

    /// Flips both labels of an edge pair. Accepts either half-edge name.
    pub fn edge_sign_change(&self, e: &str) -> GbsResult<LabeledGraph> {
        let h = self.require_half_edge(e)?;
        let mut g = self.clone();
        let rec = &mut g.edges[h.edge()];
        rec.label_from = -rec.label_from;
        rec.label_to = -rec.label_to;
        Ok(g)
    }

    /// Sum of `|λ(e)|` over `E_0(v)`: the valence of a Bass–Serre tree vertex
    /// above `v`.
    pub fn tree_valence(&self, v: usize) -> u64 {
        self.incident(v).iter().map(|&h| self.label(h).unsigned_abs()).sum()
    }
}

/// A choice of one half-edge per edge pair (the `plus` half-edges).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DirectedStructure {
    forward_plus: Vec<bool>,
}

impl DirectedStructure {
    /// `flags[i]` says whether the half-edge with origin `from` of edge record
    /// `i` is the plus one.
    pub fn from_forward_flags(flags: Vec<bool>) -> DirectedStructure {
        DirectedStructure { forward_plus: flags }
    }

    /// Requires exactly one member of every edge pair.
    pub fn from_plus(g: &LabeledGraph, plus: &[HalfEdge]) -> GbsResult<DirectedStructure> {
        let mut flags: Vec<Option<bool>> = vec![None; g.edge_count()];
        for &h in plus {
            if h.edge() >= g.edge_count() {
                return Err(GbsError::UnknownHalfEdge(format!("#{}", h.index())));
            }
            if flags[h.edge()].replace(h.is_forward()).is_some() {
                return Err(GbsError::InvalidGraph(format!(
                    "edge {} has both half-edges marked plus",
                    g.edges()[h.edge()].id
                )));
            }
        }
        let mut out = Vec::with_capacity(flags.len());
        for (i, f) in flags.into_iter().enumerate() {
            match f {
                Some(b) => out.push(b),
                None => {
                    return Err(GbsError::InvalidGraph(format!(
                        "edge {} has no plus half-edge",
                        g.edges()[i].id
                    )))
                }
            }
        }
        Ok(DirectedStructure { forward_plus: out })
    }

    pub fn from_plus_names(g: &LabeledGraph, names: &[&str]) -> GbsResult<DirectedStructure> {
        let hs = names.iter().map(|n| g.require_half_edge(n)).collect::<GbsResult<Vec<_>>>()?;
        DirectedStructure::from_plus(g, &hs)
    }

    pub fn edge_count(&self) -> usize {
        self.forward_plus.len()
    }

    pub fn forward_flags(&self) -> &[bool] {
        &self.forward_plus
    }

    pub fn is_plus(&self, h: HalfEdge) -> bool {
        self.forward_plus[h.edge()] == h.is_forward()
    }

    pub fn plus_half_edges(&self) -> Vec<HalfEdge> {
        (0..self.forward_plus.len()).map(|i| HalfEdge::new(i, self.forward_plus[i])).collect()
    }

    pub fn check_against(&self, g: &LabeledGraph) -> GbsResult<()> {
        if self.forward_plus.len() == g.edge_count() {
            Ok(())
        } else {
            Err(GbsError::InvalidGraph(format!(
                "directed structure covers {} edges but the graph has {}",
                self.forward_plus.len(),
                g.edge_count()
            )))
        }
    }
}
