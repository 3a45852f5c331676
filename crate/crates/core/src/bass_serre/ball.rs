use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use num_integer::Integer;

use super::skeleton::ColoredGraph;
use crate::error::{GbsError, GbsResult};
use crate::graph_core::{DirectedStructure, HalfEdge, LabeledGraph};
use crate::lattice::{check_lattice_prop, LatticeParams};
use crate::limits::Limits;

/// A vertex of the Bass–Serre tree: a branching line over a graph vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub vertex: usize,
    pub depth: usize,
    pub parent: Option<TreeLink>,
}

/// The parent of a tree node and the slot `(half_edge, index)` at the parent
/// through which the node is reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeLink {
    pub node: usize,
    pub half_edge: HalfEdge,
    pub slot: u64,
}

/// The strip over one tree edge. Vertical edges run from position
/// `lower_residue + s·lower_spacing` on the lower line to
/// `upper_residue + s·upper_spacing` on the upper line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Strip {
    pub lower: usize,
    pub upper: usize,
    /// The plus half-edge of the graph, seen from the lower line.
    pub half_edge: HalfEdge,
    pub lower_residue: u64,
    pub lower_spacing: u64,
    pub upper_residue: u64,
    pub upper_spacing: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinePoint {
    pub node: usize,
    pub pos: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerticalEdge {
    pub from: usize,
    pub to: usize,
    pub strip: usize,
    pub s: i64,
}

/// A 2-cell of a strip between vertical edges `s` and `s + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub strip: usize,
    pub s: i64,
    pub bottom: u64,
    pub top: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BallShape {
    /// Tree ball of radius `radius`, every line cut to `[-width, width]`.
    TreeWindow { radius: usize, width: i64 },
    /// All points within 1-skeleton distance `radius` of the root point.
    Metric { radius: usize },
}

/// A finite piece of the complex `X_{(A,λ)}`. Strips are indexed by the tree
/// node on the far side of the tree edge from the root.
#[derive(Clone, Debug)]
pub struct ComplexBall {
    pub graph: LabeledGraph,
    pub plus: DirectedStructure,
    /// `(m, n)` when the graph satisfies the lattice conditions for them.
    pub params: Option<LatticeParams>,
    pub shape: BallShape,
    pub nodes: Vec<TreeNode>,
    pub strips: HashMap<usize, Strip>,
    pub points: Vec<LinePoint>,
    pub horizontal: Vec<(usize, usize)>,
    pub vertical: Vec<VerticalEdge>,
    pub cells: Vec<Cell>,
    /// Points whose full neighbourhood in the complex lies in the ball.
    pub complete: Vec<bool>,
    pub root: usize,
    point_index: HashMap<LinePoint, usize>,
}

struct Tree<'a> {
    g: &'a LabeledGraph,
    plus: &'a DirectedStructure,
    nodes: Vec<TreeNode>,
    children: HashMap<(usize, HalfEdge, u64), usize>,
}

fn k_of(g: &LabeledGraph, h: HalfEdge) -> u64 {
    g.label(h).unsigned_abs().gcd(&g.label(h.reverse()).unsigned_abs())
}

fn spacing(g: &LabeledGraph, h: HalfEdge) -> u64 {
    g.label(h).unsigned_abs() / k_of(g, h)
}

impl<'a> Tree<'a> {
    fn new(g: &'a LabeledGraph, plus: &'a DirectedStructure, base: usize) -> Tree<'a> {
        Tree { g, plus, nodes: vec![TreeNode { vertex: base, depth: 0, parent: None }], children: HashMap::new() }
    }

    fn is_parent_slot(&self, x: usize, h: HalfEdge, t: u64) -> bool {
        matches!(self.nodes[x].parent, Some(l) if l.half_edge.reverse() == h && t == 0)
    }

    fn existing(&self, x: usize, h: HalfEdge, t: u64) -> Option<usize> {
        if self.is_parent_slot(x, h, t) {
            self.nodes[x].parent.map(|l| l.node)
        } else {
            self.children.get(&(x, h, t)).copied()
        }
    }

    fn neighbor(&mut self, x: usize, h: HalfEdge, t: u64) -> usize {
        if let Some(y) = self.existing(x, h, t) {
            return y;
        }
        let y = self.nodes.len();
        let node = TreeNode {
            vertex: self.g.terminus(h),
            depth: self.nodes[x].depth + 1,
            parent: Some(TreeLink { node: x, half_edge: h, slot: t }),
        };
        self.nodes.push(node);
        self.children.insert((x, h, t), y);
        y
    }

    /// Slot of node `y` that leads back to `x`, where `y` is the neighbour of
    /// `x` through slot `(h, t)`.
    fn back_slot(&self, x: usize, h: HalfEdge, t: u64, y: usize) -> (HalfEdge, u64) {
        if self.is_parent_slot(x, h, t) {
            let l = self.nodes[x].parent.unwrap();
            debug_assert_eq!(l.node, y);
            (l.half_edge, l.slot)
        } else {
            (h.reverse(), 0)
        }
    }

    fn slots(&self, x: usize) -> Vec<(HalfEdge, u64)> {
        let v = self.nodes[x].vertex;
        let mut out = Vec::new();
        for &h in self.g.incident(v) {
            for t in 0..self.g.label(h).unsigned_abs() {
                out.push((h, t));
            }
        }
        out
    }

    /// Vertical neighbours of `(x, p)`: `(neighbour point, outgoing?, tree edge child, s)`.
    fn vertical(&mut self, x: usize, p: i64, create: bool) -> Vec<(LinePoint, bool, usize, i64)> {
        let v = self.nodes[x].vertex;
        let mut out = Vec::new();
        for &h in self.g.incident(v) {
            let a = spacing(self.g, h) as i64;
            let r = p.rem_euclid(a);
            let s = (p - r) / a;
            for j in 0..k_of(self.g, h) as i64 {
                let t = (r + j * a) as u64;
                let y = if create { Some(self.neighbor(x, h, t)) } else { self.existing(x, h, t) };
                let Some(y) = y else { continue };
                let (hb, tb) = self.back_slot(x, h, t, y);
                let b = spacing(self.g, hb) as i64;
                let q = (tb as i64).rem_euclid(b) + s * b;
                let child = if self.nodes[y].depth > self.nodes[x].depth { y } else { x };
                out.push((LinePoint { node: y, pos: q }, self.plus.is_plus(h), child, s));
            }
        }
        out
    }

    fn strip(&self, child: usize) -> Strip {
        let l = self.nodes[child].parent.expect("strip over a tree edge");
        let (hp, tp) = (l.half_edge, l.slot);
        let hc = hp.reverse();
        let parent_side = (l.node, hp, tp % spacing(self.g, hp), spacing(self.g, hp));
        let child_side = (child, hc, 0, spacing(self.g, hc));
        let (lo, up) = if self.plus.is_plus(hp) { (parent_side, child_side) } else { (child_side, parent_side) };
        Strip {
            lower: lo.0,
            upper: up.0,
            half_edge: lo.1,
            lower_residue: lo.2,
            lower_spacing: lo.3,
            upper_residue: up.2,
            upper_spacing: up.3,
        }
    }
}

fn prepare(g: &LabeledGraph, plus: &DirectedStructure, base: &str) -> GbsResult<(usize, Option<LatticeParams>)> {
    g.ensure_valid()?;
    plus.check_against(g)?;
    if !g.all_labels_positive() {
        return Err(GbsError::Constraint("ball construction needs positive labels; normalize signs first".into()));
    }
    let b = g.require_vertex(base)?;
    let (mut m, mut n) = (0u64, 0u64);
    for &h in g.incident(b) {
        if plus.is_plus(h) {
            n += g.label(h).unsigned_abs();
        } else {
            m += g.label(h).unsigned_abs();
        }
    }
    let params = match LatticeParams::new(m, n) {
        Ok(p) if check_lattice_prop(g, plus, p)?.holds() => Some(p),
        _ => None,
    };
    Ok((b, params))
}

pub fn build_ball(
    g: &LabeledGraph,
    plus: &DirectedStructure,
    base: &str,
    radius: usize,
    width: i64,
) -> GbsResult<ComplexBall> {
    build_ball_with(g, plus, base, radius, width, &Limits::from_env())
}

/// Tree ball of radius `radius` around a lift of `base`, each branching line
/// realized as the window `[-width, width]`.
pub fn build_ball_with(
    g: &LabeledGraph,
    plus: &DirectedStructure,
    base: &str,
    radius: usize,
    width: i64,
    limits: &Limits,
) -> GbsResult<ComplexBall> {
    let (b, params) = prepare(g, plus, base)?;
    if radius > limits.ball_radius {
        return Err(GbsError::Guard(format!("ball radius {radius} exceeds {}", limits.ball_radius)));
    }
    if width < 1 || width as usize > limits.ball_width {
        return Err(GbsError::Guard(format!("ball width {width} outside 1..={}", limits.ball_width)));
    }
    let line = (2 * width + 1) as usize;
    let mut tree = Tree::new(g, plus, b);
    let mut frontier = vec![0usize];
    for _ in 0..radius {
        let mut next = Vec::new();
        for x in frontier {
            for (h, t) in tree.slots(x) {
                if !tree.is_parent_slot(x, h, t) {
                    next.push(tree.neighbor(x, h, t));
                }
            }
            if tree.nodes.len().saturating_mul(line) > limits.ball_vertices {
                return Err(GbsError::Guard(format!("ball exceeds {} line vertices", limits.ball_vertices)));
            }
        }
        frontier = next;
    }
    let mut ball = ComplexBall::empty(g, plus, params, BallShape::TreeWindow { radius, width });
    for x in 0..tree.nodes.len() {
        for pos in -width..=width {
            ball.add_point(LinePoint { node: x, pos });
        }
    }
    for x in 0..tree.nodes.len() {
        for pos in -width..width {
            let a = ball.point_index[&LinePoint { node: x, pos }];
            ball.horizontal.push((a, a + 1));
        }
    }
    for child in 1..tree.nodes.len() {
        let st = tree.strip(child);
        ball.strips.insert(child, st);
        let range = |r: u64, a: u64| {
            let (r, a) = (r as i64, a as i64);
            (Integer::div_ceil(&(-width - r), &a), Integer::div_floor(&(width - r), &a))
        };
        let (l0, l1) = range(st.lower_residue, st.lower_spacing);
        let (u0, u1) = range(st.upper_residue, st.upper_spacing);
        let (s0, s1) = (l0.max(u0), l1.min(u1));
        for s in s0..=s1 {
            let from = ball.point_index[&LinePoint { node: st.lower, pos: st.lower_residue as i64 + s * st.lower_spacing as i64 }];
            let to = ball.point_index[&LinePoint { node: st.upper, pos: st.upper_residue as i64 + s * st.upper_spacing as i64 }];
            ball.vertical.push(VerticalEdge { from, to, strip: child, s });
            if s < s1 {
                ball.cells.push(Cell { strip: child, s, bottom: st.lower_spacing, top: st.upper_spacing });
            }
        }
    }
    ball.nodes = tree.nodes.clone();
    for (i, pt) in ball.points.clone().into_iter().enumerate() {
        let inner = tree.nodes[pt.node].depth < radius && pt.pos.abs() < width;
        ball.complete[i] = inner
            && tree.vertical(pt.node, pt.pos, false).iter().all(|(q, ..)| q.pos.abs() <= width);
    }
    ball.root = ball.point_index[&LinePoint { node: 0, pos: 0 }];
    Ok(ball)
}

pub fn build_metric_ball(g: &LabeledGraph, plus: &DirectedStructure, base: &str, radius: usize) -> GbsResult<ComplexBall> {
    build_metric_ball_with(g, plus, base, radius, &Limits::from_env())
}

/// All points within 1-skeleton distance `radius` of position 0 on a lift of
/// `base`, with every edge between them.
pub fn build_metric_ball_with(
    g: &LabeledGraph,
    plus: &DirectedStructure,
    base: &str,
    radius: usize,
    limits: &Limits,
) -> GbsResult<ComplexBall> {
    let (b, params) = prepare(g, plus, base)?;
    if radius > limits.metric_radius {
        return Err(GbsError::Guard(format!("metric radius {radius} exceeds {}", limits.metric_radius)));
    }
    let mut tree = Tree::new(g, plus, b);
    let mut ball = ComplexBall::empty(g, plus, params, BallShape::Metric { radius });
    let mut dist = vec![0usize];
    ball.add_point(LinePoint { node: 0, pos: 0 });
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if dist[i] == radius {
            continue;
        }
        let pt = ball.points[i];
        let mut next: Vec<LinePoint> = vec![LinePoint { pos: pt.pos - 1, ..pt }, LinePoint { pos: pt.pos + 1, ..pt }];
        next.extend(tree.vertical(pt.node, pt.pos, true).into_iter().map(|(q, ..)| q));
        for q in next {
            if !ball.point_index.contains_key(&q) {
                ball.add_point(q);
                dist.push(dist[i] + 1);
                queue.push_back(ball.points.len() - 1);
                if ball.points.len() > limits.ball_vertices {
                    return Err(GbsError::Guard(format!("ball exceeds {} vertices", limits.ball_vertices)));
                }
            }
        }
    }
    let mut seen_v = HashSet::new();
    for i in 0..ball.points.len() {
        let pt = ball.points[i];
        if let Some(&j) = ball.point_index.get(&LinePoint { pos: pt.pos + 1, ..pt }) {
            ball.horizontal.push((i, j));
        }
        for (q, out, child, s) in tree.vertical(pt.node, pt.pos, false) {
            let Some(&j) = ball.point_index.get(&q) else { continue };
            if out && seen_v.insert((i, j, child, s)) {
                ball.vertical.push(VerticalEdge { from: i, to: j, strip: child, s });
            }
        }
        ball.complete[i] = dist[i] < radius;
    }
    ball.nodes = tree.nodes.clone();
    for child in 1..tree.nodes.len() {
        ball.strips.insert(child, tree.strip(child));
    }
    let mut by_strip: HashMap<(usize, i64), ()> = HashMap::new();
    for e in &ball.vertical {
        by_strip.insert((e.strip, e.s), ());
    }
    let mut cells = Vec::new();
    for &(strip, s) in by_strip.keys() {
        if !by_strip.contains_key(&(strip, s + 1)) {
            continue;
        }
        let st = ball.strips[&strip];
        let side_present = |node: usize, r: u64, a: u64| {
            let start = r as i64 + s * a as i64;
            (start..=start + a as i64).all(|p| ball.point_index.contains_key(&LinePoint { node, pos: p }))
        };
        if side_present(st.lower, st.lower_residue, st.lower_spacing)
            && side_present(st.upper, st.upper_residue, st.upper_spacing)
        {
            cells.push(Cell { strip, s, bottom: st.lower_spacing, top: st.upper_spacing });
        }
    }
    cells.sort_by_key(|c| (c.strip, c.s));
    ball.cells = cells;
    ball.root = 0;
    Ok(ball)
}

impl ComplexBall {
    fn empty(g: &LabeledGraph, plus: &DirectedStructure, params: Option<LatticeParams>, shape: BallShape) -> ComplexBall {
        ComplexBall {
            graph: g.clone(),
            plus: plus.clone(),
            params,
            shape,
            nodes: Vec::new(),
            strips: HashMap::new(),
            points: Vec::new(),
            horizontal: Vec::new(),
            vertical: Vec::new(),
            cells: Vec::new(),
            complete: Vec::new(),
            root: 0,
            point_index: HashMap::new(),
        }
    }

    fn add_point(&mut self, p: LinePoint) -> usize {
        let i = self.points.len();
        self.points.push(p);
        self.complete.push(false);
        self.point_index.insert(p, i);
        i
    }

    pub fn point(&self, p: LinePoint) -> Option<usize> {
        self.point_index.get(&p).copied()
    }

    /// Graph vertex under the line of each point.
    pub fn point_vertex(&self, i: usize) -> usize {
        self.nodes[self.points[i].node].vertex
    }

    /// Tree nodes whose every slot leads to a node of the ball.
    fn saturated_nodes(&self) -> Vec<usize> {
        let mut degree = vec![0u64; self.nodes.len()];
        for (x, n) in self.nodes.iter().enumerate() {
            if let Some(l) = n.parent {
                degree[x] += 1;
                degree[l.node] += 1;
            }
        }
        (0..self.nodes.len())
            .filter(|&x| {
                let v = self.nodes[x].vertex;
                let slots: u64 = self.graph.incident(v).iter().map(|&h| self.graph.label(h).unsigned_abs()).sum();
                degree[x] == slots
            })
            .collect()
    }

    /// Violations of the local structure of the complex; empty when the ball
    /// is consistent.
    pub fn check_invariants(&self) -> Vec<String> {
        let g = &self.graph;
        let mut bad = Vec::new();
        let mut out_deg = vec![0u64; self.points.len()];
        let mut in_deg = vec![0u64; self.points.len()];
        for e in &self.vertical {
            out_deg[e.from] += 1;
            in_deg[e.to] += 1;
            let st = &self.strips[&e.strip];
            let (pf, pt) = (self.points[e.from], self.points[e.to]);
            if pf.node != st.lower || pt.node != st.upper {
                bad.push(format!("vertical edge {e:?} does not run from the lower to the upper line of its strip"));
            }
        }
        for (i, &c) in self.complete.iter().enumerate() {
            if !c {
                continue;
            }
            let v = self.point_vertex(i);
            let (mut want_out, mut want_in) = (0u64, 0u64);
            for &h in g.incident(v) {
                if self.plus.is_plus(h) {
                    want_out += k_of(g, h);
                } else {
                    want_in += k_of(g, h);
                }
            }
            if let Some(p) = self.params {
                if want_out != p.k() || want_in != p.k() {
                    bad.push(format!("vertex `{}` does not give {} vertical edges each way", g.vertex_name(v), p.k()));
                }
            }
            if out_deg[i] != want_out || in_deg[i] != want_in {
                bad.push(format!(
                    "point {:?} has {} outgoing and {} incoming vertical edges, expected {want_out} and {want_in}",
                    self.points[i], out_deg[i], in_deg[i]
                ));
            }
        }
        for (&child, st) in &self.strips {
            let h = st.half_edge;
            let want = (spacing(g, h), spacing(g, h.reverse()));
            if (st.lower_spacing, st.upper_spacing) != want {
                bad.push(format!("strip {child} has spacings {:?}, expected {want:?}", (st.lower_spacing, st.upper_spacing)));
            }
            if let Some(p) = self.params {
                if (st.upper_spacing, st.lower_spacing) != (p.m_prime(), p.n_prime()) {
                    bad.push(format!("strip {child} is a ({}, {}) strip", st.upper_spacing, st.lower_spacing));
                }
            }
        }
        for c in &self.cells {
            let st = &self.strips[&c.strip];
            if (c.bottom, c.top) != (st.lower_spacing, st.upper_spacing) {
                bad.push(format!("cell {c:?} does not match its strip"));
            }
        }
        for x in self.saturated_nodes() {
            let mut above: HashMap<u64, u64> = HashMap::new();
            let mut below: HashMap<u64, u64> = HashMap::new();
            let (mut n_above, mut n_below) = (0u64, 0u64);
            for st in self.strips.values() {
                if st.lower == x {
                    *above.entry(st.lower_residue % st.lower_spacing).or_default() += 1;
                    n_above += 1;
                }
                if st.upper == x {
                    *below.entry(st.upper_residue % st.upper_spacing).or_default() += 1;
                    n_below += 1;
                }
            }
            let v = self.nodes[x].vertex;
            let (mut want_above, mut want_below) = (0u64, 0u64);
            for &h in g.incident(v) {
                if self.plus.is_plus(h) {
                    want_above += g.label(h).unsigned_abs();
                } else {
                    want_below += g.label(h).unsigned_abs();
                }
            }
            if (n_above, n_below) != (want_above, want_below) {
                bad.push(format!("line {x} has {n_above} strips above and {n_below} below"));
            }
            if let Some(p) = self.params {
                let ok_above = above.len() as u64 == p.n_prime() && above.values().all(|&c| c == p.k());
                let ok_below = below.len() as u64 == p.m_prime() && below.values().all(|&c| c == p.k());
                if !ok_above || !ok_below {
                    bad.push(format!("line {x} violates the coset rule"));
                }
            }
        }
        bad
    }

    /// The 1-skeleton: horizontal edges undirected (color 0), vertical edges
    /// directed upward (arc colors 2 and 3).
    pub fn skeleton(&self) -> ColoredGraph {
        let mut sk = ColoredGraph::new(self.points.len());
        for &(a, b) in &self.horizontal {
            sk.add_undirected(a, b, 0);
        }
        for e in &self.vertical {
            sk.add_directed(e.from, e.to, 1);
        }
        sk
    }

    pub fn to_dot(&self) -> String {
        const PALETTE: [&str; 7] = ["black", "red", "blue", "darkgreen", "orange", "purple", "brown"];
        let mut s = String::from("digraph ball {\n  node [shape=point];\n");
        for (i, p) in self.points.iter().enumerate() {
            let depth = self.nodes[p.node].depth;
            let _ = writeln!(
                s,
                "  p{i} [color={}, tooltip=\"{}:{}:{}\"];",
                PALETTE[depth % PALETTE.len()],
                self.graph.vertex_name(self.nodes[p.node].vertex),
                p.node,
                p.pos
            );
        }
        for &(a, b) in &self.horizontal {
            let _ = writeln!(s, "  p{a} -> p{b} [dir=none];");
        }
        for e in &self.vertical {
            let _ = writeln!(s, "  p{} -> p{};", e.from, e.to);
        }
        s.push_str("}\n");
        s
    }
}
