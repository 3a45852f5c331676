//! Certification of labeled graphs as uniform lattices in `Aut(X_{m,n})`.

use num_integer::Integer;

use crate::error::{GbsError, GbsResult};
use crate::graph_core::{DirectedStructure, HalfEdge, LabeledGraph};
use crate::limits::Limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeParams {
    pub m: u64,
    pub n: u64,
}

impl LatticeParams {
    pub fn new(m: u64, n: u64) -> GbsResult<LatticeParams> {
        if m == 0 || n == 0 {
            return Err(GbsError::Constraint("lattice parameters must be positive".into()));
        }
        Ok(LatticeParams { m, n })
    }

    pub fn k(&self) -> u64 {
        self.m.gcd(&self.n)
    }

    pub fn m_prime(&self) -> u64 {
        self.m / self.k()
    }

    pub fn n_prime(&self) -> u64 {
        self.n / self.k()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeViolation {
    /// Condition tag: `i1`, `i2`, `j1`, `j2`, `j5`, `j3` or `j4`.
    pub condition: &'static str,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LatticeReport {
    pub violations: Vec<LatticeViolation>,
}

impl LatticeReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, condition: &'static str, message: String) {
        self.violations.push(LatticeViolation { condition, message });
    }
}

fn abs_label(g: &LabeledGraph, h: HalfEdge) -> u64 {
    g.label(h).unsigned_abs()
}

/// Plus and minus label sums at every vertex.
fn vertex_sums(g: &LabeledGraph, dir: &DirectedStructure) -> Vec<(u64, u64)> {
    let mut sums = vec![(0u64, 0u64); g.vertex_count()];
    for h in g.half_edges() {
        let s = &mut sums[g.origin(h)];
        if dir.is_plus(h) {
            s.0 += abs_label(g, h);
        } else {
            s.1 += abs_label(g, h);
        }
    }
    sums
}

fn check_i1(g: &LabeledGraph, dir: &DirectedStructure, p: LatticeParams, tag: &'static str, r: &mut LatticeReport) {
    for (v, (plus, minus)) in vertex_sums(g, dir).into_iter().enumerate() {
        if plus != p.n {
            r.push(tag, format!("plus labels at `{}` sum to {plus}, expected {}", g.vertex_name(v), p.n));
        }
        if minus != p.m {
            r.push(tag, format!("minus labels at `{}` sum to {minus}, expected {}", g.vertex_name(v), p.m));
        }
    }
}

fn strip_type_ok(g: &LabeledGraph, h: HalfEdge, p: LatticeParams) -> bool {
    let (ne, me) = (abs_label(g, h), abs_label(g, h.reverse()));
    let ke = ne.gcd(&me);
    ne / ke == p.n_prime() && me / ke == p.m_prime()
}

/// Checks the two conditions making `X_{(A,λ)}` isomorphic to `X_{m,n}`:
/// label sums at each vertex (`i1`) and the strip type of every edge (`i2`).
pub fn check_lattice_prop(g: &LabeledGraph, dir: &DirectedStructure, p: LatticeParams) -> GbsResult<LatticeReport> {
    dir.check_against(g)?;
    let mut r = LatticeReport::default();
    check_i1(g, dir, p, "i1", &mut r);
    for h in dir.plus_half_edges() {
        if !strip_type_ok(g, h, p) {
            r.push(
                "i2",
                format!(
                    "plus half-edge `{}` has labels ({}, {}), not a ({}, {}) strip",
                    g.half_edge_name(h),
                    abs_label(g, h.reverse()),
                    abs_label(g, h),
                    p.m_prime(),
                    p.n_prime()
                ),
            );
        }
    }
    Ok(r)
}

pub fn find_directed_structure(g: &LabeledGraph, p: LatticeParams) -> GbsResult<Option<DirectedStructure>> {
    find_directed_structure_with(g, p, &Limits::from_env())
}

/// Least directed structure (forward flags compared lexicographically, reverse
/// plus first) satisfying the lattice conditions, by exhaustive search.
pub fn find_directed_structure_with(
    g: &LabeledGraph,
    p: LatticeParams,
    limits: &Limits,
) -> GbsResult<Option<DirectedStructure>> {
    if g.edge_count() > limits.direction_pairs {
        return Err(GbsError::Guard(format!(
            "directed structure search over {} edge pairs exceeds {}",
            g.edge_count(),
            limits.direction_pairs
        )));
    }
    let mut remaining = vec![0u64; g.vertex_count()];
    for h in g.half_edges() {
        remaining[g.origin(h)] += abs_label(g, h);
    }
    if remaining.iter().any(|&t| t != p.m + p.n) {
        return Ok(None);
    }
    let mut search = DirSearch {
        g,
        p,
        flags: Vec::with_capacity(g.edge_count()),
        plus: vec![0; g.vertex_count()],
        minus: vec![0; g.vertex_count()],
    };
    Ok(search.run(0).then(|| DirectedStructure::from_forward_flags(search.flags)))
}

struct DirSearch<'a> {
    g: &'a LabeledGraph,
    p: LatticeParams,
    flags: Vec<bool>,
    plus: Vec<u64>,
    minus: Vec<u64>,
}

impl DirSearch<'_> {
    fn run(&mut self, edge: usize) -> bool {
        if edge == self.g.edge_count() {
            return self.plus.iter().all(|&s| s == self.p.n) && self.minus.iter().all(|&s| s == self.p.m);
        }
        for forward_plus in [false, true] {
            let h = HalfEdge::new(edge, forward_plus);
            if !strip_type_ok(self.g, h, self.p) {
                continue;
            }
            let (a, b) = (self.g.origin(h), self.g.terminus(h));
            let (la, lb) = (abs_label(self.g, h), abs_label(self.g, h.reverse()));
            self.plus[a] += la;
            self.minus[b] += lb;
            if self.plus[a] <= self.p.n && self.minus[b] <= self.p.m {
                self.flags.push(forward_plus);
                if self.run(edge + 1) {
                    return true;
                }
                self.flags.pop();
            }
            self.plus[a] -= la;
            self.minus[b] -= lb;
        }
        false
    }
}

/// Positive lengths of vertex circles and edge annuli.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthFunction {
    pub vertex: Vec<u64>,
    pub edge: Vec<u64>,
}

impl LengthFunction {
    /// Lengths 1 on vertices and `gcd` of the labels on edges; satisfies the
    /// length equations whenever the lattice conditions hold.
    pub fn unit(g: &LabeledGraph) -> LengthFunction {
        LengthFunction {
            vertex: vec![1; g.vertex_count()],
            edge: g
                .edges()
                .iter()
                .map(|e| e.label_from.unsigned_abs().gcd(&e.label_to.unsigned_abs()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CharReport {
    pub violations: Vec<LatticeViolation>,
    /// Equal-sum partitions found for the plus and minus half-edges at each vertex.
    pub partitions: Vec<(Vec<Vec<String>>, Vec<Vec<String>>)>,
    pub j3: bool,
    pub j4: bool,
}

impl CharReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_lattice_char(
    g: &LabeledGraph,
    dir: &DirectedStructure,
    ell: &LengthFunction,
    p: LatticeParams,
) -> GbsResult<CharReport> {
    check_lattice_char_with(g, dir, ell, p, &Limits::from_env())
}

/// Checks `j1`, `j2` and `j5`, and reports `j3` and `j4`. When the first three
/// hold but either derived condition fails, that is recorded as a violation.
pub fn check_lattice_char_with(
    g: &LabeledGraph,
    dir: &DirectedStructure,
    ell: &LengthFunction,
    p: LatticeParams,
    limits: &Limits,
) -> GbsResult<CharReport> {
    dir.check_against(g)?;
    if ell.vertex.len() != g.vertex_count() || ell.edge.len() != g.edge_count() {
        return Err(GbsError::Constraint("length function does not match the graph".into()));
    }
    if ell.vertex.contains(&0) || ell.edge.contains(&0) {
        return Err(GbsError::Constraint("lengths must be positive".into()));
    }
    for v in 0..g.vertex_count() {
        let (plus, minus) = split_at(g, dir, v);
        if plus.len().max(minus.len()) > limits.partition_edges {
            return Err(GbsError::Guard(format!(
                "partition search at `{}` over more than {} half-edges",
                g.vertex_name(v),
                limits.partition_edges
            )));
        }
    }
    let mut lr = LatticeReport::default();
    check_i1(g, dir, p, "j1", &mut lr);
    let (np, mp) = (p.n_prime(), p.m_prime());
    for h in dir.plus_half_edges() {
        let le = ell.edge[h.edge()];
        let (x, y) = (g.origin(h), g.terminus(h));
        let name = g.half_edge_name(h);
        if ell.vertex[x] * abs_label(g, h) != np * le {
            lr.push("j2", format!("edge `{name}`: l(origin)|label| = {} but n'l(e) = {}", ell.vertex[x] * abs_label(g, h), np * le));
        }
        if ell.vertex[y] * abs_label(g, h.reverse()) != mp * le {
            lr.push(
                "j2",
                format!("edge `{name}`: l(terminus)|label| = {} but m'l(e) = {}", ell.vertex[y] * abs_label(g, h.reverse()), mp * le),
            );
        }
    }
    let mut partitions = Vec::with_capacity(g.vertex_count());
    for v in 0..g.vertex_count() {
        let (plus, minus) = split_at(g, dir, v);
        let k0 = ell.vertex[v].gcd(&np);
        let k1 = ell.vertex[v].gcd(&mp);
        let mut found = (Vec::new(), Vec::new());
        for (side, set, parts) in [("plus", &plus, k0), ("minus", &minus, k1)] {
            let weights: Vec<u64> = set.iter().map(|&h| abs_label(g, h)).collect();
            match equal_sum_partition(&weights, parts as usize) {
                Some(groups) => {
                    let named: Vec<Vec<String>> =
                        groups.iter().map(|grp| grp.iter().map(|&i| g.half_edge_name(set[i])).collect()).collect();
                    if side == "plus" {
                        found.0 = named;
                    } else {
                        found.1 = named;
                    }
                }
                None => lr.push(
                    "j5",
                    format!(
                        "{side} half-edges at `{}` admit no partition into {parts} parts of equal label sum",
                        g.vertex_name(v)
                    ),
                ),
            }
        }
        partitions.push(found);
    }
    let j3 = (0..g.vertex_count()).all(|v| {
        let (plus, minus) = split_at(g, dir, v);
        let kl = p.k() * ell.vertex[v];
        plus.iter().map(|h| ell.edge[h.edge()]).sum::<u64>() == kl
            && minus.iter().map(|h| ell.edge[h.edge()]).sum::<u64>() == kl
    });
    let j4 = strongly_connected(g, dir);
    if lr.holds() {
        if !j3 {
            lr.push("j3", "length sums fail although j1, j2 and j5 hold".into());
        }
        if !j4 {
            lr.push("j4", "directed graph is not strongly connected although j1, j2 and j5 hold".into());
        }
    }
    Ok(CharReport { violations: lr.violations, partitions, j3, j4 })
}

fn split_at(g: &LabeledGraph, dir: &DirectedStructure, v: usize) -> (Vec<HalfEdge>, Vec<HalfEdge>) {
    g.incident(v).iter().copied().partition(|&h| dir.is_plus(h))
}

/// Partition of `weights` into `parts` nonempty groups of equal sum, by
/// backtracking over items in decreasing weight.
pub fn equal_sum_partition(weights: &[u64], parts: usize) -> Option<Vec<Vec<usize>>> {
    if parts == 0 {
        return weights.is_empty().then(Vec::new);
    }
    let total: u64 = weights.iter().sum();
    if weights.len() < parts || total % parts as u64 != 0 {
        return None;
    }
    let target = total / parts as u64;
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| weights[b].cmp(&weights[a]).then(a.cmp(&b)));
    if weights[order[0]] > target {
        return None;
    }
    let mut sums = vec![0u64; parts];
    let mut groups = vec![Vec::new(); parts];
    fn go(
        i: usize,
        order: &[usize],
        weights: &[u64],
        target: u64,
        sums: &mut [u64],
        groups: &mut [Vec<usize>],
    ) -> bool {
        if i == order.len() {
            return sums.iter().all(|&s| s == target);
        }
        let w = weights[order[i]];
        for p in 0..sums.len() {
            if sums[p] + w > target {
                continue;
            }
            // Empty groups are interchangeable; try only the first.
            if sums[p] == 0 && p > 0 && sums[p - 1] == 0 {
                break;
            }
            sums[p] += w;
            groups[p].push(order[i]);
            if go(i + 1, order, weights, target, sums, groups) {
                return true;
            }
            groups[p].pop();
            sums[p] -= w;
        }
        false
    }
    if go(0, &order, weights, target, &mut sums, &mut groups) {
        for grp in &mut groups {
            grp.sort_unstable();
        }
        Some(groups)
    } else {
        None
    }
}

/// Strong connectivity of the directed graph whose arcs are the plus half-edges.
pub fn strongly_connected(g: &LabeledGraph, dir: &DirectedStructure) -> bool {
    let n = g.vertex_count();
    if n == 0 {
        return false;
    }
    let arcs: Vec<(usize, usize)> = dir.plus_half_edges().iter().map(|&h| (g.origin(h), g.terminus(h))).collect();
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &(a, b) in &arcs {
                let (s, t) = if forward { (a, b) } else { (b, a) };
                if s == x && !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen.iter().all(|&s| s)
    };
    reach(true) && reach(false)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LengthSearch {
    Found(LengthFunction),
    /// Nothing with vertex lengths up to the bound; existence is undecided.
    Unknown { bound: u64 },
}

pub fn find_length_function(
    g: &LabeledGraph,
    dir: &DirectedStructure,
    p: LatticeParams,
) -> GbsResult<LengthSearch> {
    find_length_function_with(g, dir, p, &Limits::from_env())
}

/// Iterates vertex lengths in `1..=bound` (lexicographically) and derives the
/// edge lengths from the first length equation.
pub fn find_length_function_with(
    g: &LabeledGraph,
    dir: &DirectedStructure,
    p: LatticeParams,
    limits: &Limits,
) -> GbsResult<LengthSearch> {
    dir.check_against(g)?;
    let bound = limits.length_bound;
    let nv = g.vertex_count() as u32;
    let space = (bound as u128).checked_pow(nv).unwrap_or(u128::MAX);
    if space > 1_000_000 {
        return Err(GbsError::Guard(format!("length search space {bound}^{nv} exceeds 10^6")));
    }
    let mut lens = vec![1u64; g.vertex_count()];
    loop {
        if let Some(edge) = derive_edge_lengths(g, dir, &lens, p) {
            let ell = LengthFunction { vertex: lens.clone(), edge };
            if check_lattice_char_with(g, dir, &ell, p, limits)?.holds() {
                return Ok(LengthSearch::Found(ell));
            }
        }
        let mut i = lens.len();
        loop {
            if i == 0 {
                return Ok(LengthSearch::Unknown { bound });
            }
            i -= 1;
            if lens[i] < bound {
                lens[i] += 1;
                for x in &mut lens[i + 1..] {
                    *x = 1;
                }
                break;
            }
        }
    }
}

fn derive_edge_lengths(g: &LabeledGraph, dir: &DirectedStructure, lens: &[u64], p: LatticeParams) -> Option<Vec<u64>> {
    let mut edge = vec![0; g.edge_count()];
    for h in dir.plus_half_edges() {
        let num = lens[g.origin(h)] * abs_label(g, h);
        if num % p.n_prime() != 0 {
            return None;
        }
        edge[h.edge()] = num / p.n_prime();
    }
    Some(edge)
}

/// `Aut(X_{m,n})` is discrete exactly when `gcd(m,n) = 1`.
pub fn is_discrete(m: u64, n: u64) -> GbsResult<bool> {
    let p = LatticeParams::new(m, n)?;
    Ok(p.k() == 1)
}
