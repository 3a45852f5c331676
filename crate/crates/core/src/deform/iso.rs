//! Backtracking isomorphism test for small labeled graphs.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{GbsError, GbsResult};
use crate::graph_core::{HalfEdge, LabeledGraph};
use crate::limits::Limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsoMode {
    /// Incidence, involution and labels preserved.
    Exact,
    /// Absolute labels preserved and cycle-modulus signs preserved.
    UpToSignChange,
}

/// Vertex and half-edge correspondences, by name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    pub vertices: BTreeMap<String, String>,
    pub half_edges: BTreeMap<String, String>,
}

pub fn isomorphic(g1: &LabeledGraph, g2: &LabeledGraph, mode: IsoMode) -> GbsResult<Option<IsoWitness>> {
    isomorphic_with(g1, g2, mode, &Limits::DEFAULT)
}

pub fn isomorphic_with(
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    mode: IsoMode,
    limits: &Limits,
) -> GbsResult<Option<IsoWitness>> {
    for g in [g1, g2] {
        g.ensure_valid()?;
        if g.vertex_count() > limits.iso_vertices || g.edge_count() > limits.iso_edge_pairs {
            return Err(GbsError::Refused(format!(
                "isomorphism search is limited to {} vertices and {} edge pairs",
                limits.iso_vertices, limits.iso_edge_pairs
            )));
        }
    }
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return Ok(None);
    }
    let search = Search::new(g1, g2, mode);
    Ok(search.run())
}

struct Search<'a> {
    g1: &'a LabeledGraph,
    g2: &'a LabeledGraph,
    mode: IsoMode,
    sig1: Vec<Vec<(i64, i64, bool)>>,
    sig2: Vec<Vec<(i64, i64, bool)>>,
    order: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(g1: &'a LabeledGraph, g2: &'a LabeledGraph, mode: IsoMode) -> Search<'a> {
        let sig = |g: &LabeledGraph| -> Vec<Vec<(i64, i64, bool)>> {
            (0..g.vertex_count())
                .map(|v| {
                    let mut s: Vec<_> = g
                        .incident(v)
                        .iter()
                        .map(|&h| {
                            let (a, b) = (g.label(h), g.label(h.reverse()));
                            match mode {
                                IsoMode::Exact => (a, b, g.is_loop(h)),
                                IsoMode::UpToSignChange => (a.abs(), b.abs(), g.is_loop(h)),
                            }
                        })
                        .collect();
                    s.sort();
                    s
                })
                .collect()
        };
        let sig1 = sig(g1);
        let sig2 = sig(g2);
        // BFS order of g1 starting at the vertex with the rarest signature.
        let rarity = |v: usize| sig2.iter().filter(|s| **s == sig1[v]).count();
        let start = (0..g1.vertex_count()).min_by_key(|&v| (rarity(v), v)).unwrap_or(0);
        let mut order = Vec::new();
        let mut seen = vec![false; g1.vertex_count()];
        let mut queue = VecDeque::new();
        if g1.vertex_count() > 0 {
            seen[start] = true;
            queue.push_back(start);
        }
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &h in g1.incident(v) {
                let w = g1.terminus(h);
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        Search { g1, g2, mode, sig1, sig2, order }
    }

    fn key(&self, g: &LabeledGraph, h: HalfEdge, map: &dyn Fn(usize) -> usize) -> ((usize, i64), (usize, i64)) {
        let (mut a, mut b) = (g.label(h), g.label(h.reverse()));
        if self.mode == IsoMode::UpToSignChange {
            a = a.abs();
            b = b.abs();
        }
        let x = (map(g.origin(h)), a);
        let y = (map(g.terminus(h)), b);
        if x <= y {
            (x, y)
        } else {
            (y, x)
        }
    }

    /// Edge-pair keys between `v` and already-mapped vertices, in g2 terms.
    fn local_keys1(&self, v: usize, phi: &[Option<usize>]) -> Vec<((usize, i64), (usize, i64))> {
        let mut out: Vec<_> = self
            .g1
            .incident(v)
            .iter()
            .filter(|&&h| phi[self.g1.terminus(h)].is_some())
            .filter(|&&h| !(self.g1.is_loop(h) && !h.is_forward()))
            .map(|&h| self.key(self.g1, h, &|x| phi[x].unwrap()))
            .collect();
        out.sort();
        out
    }

    fn local_keys2(&self, w: usize, mapped: &[bool]) -> Vec<((usize, i64), (usize, i64))> {
        let mut out: Vec<_> = self
            .g2
            .incident(w)
            .iter()
            .filter(|&&h| mapped[self.g2.terminus(h)])
            .filter(|&&h| !(self.g2.is_loop(h) && !h.is_forward()))
            .map(|&h| self.key(self.g2, h, &|x| x))
            .collect();
        out.sort();
        out
    }

    fn run(&self) -> Option<IsoWitness> {
        let n = self.g1.vertex_count();
        let mut phi = vec![None; n];
        let mut used = vec![false; n];
        self.extend(0, &mut phi, &mut used)
    }

    fn extend(&self, depth: usize, phi: &mut Vec<Option<usize>>, used: &mut Vec<bool>) -> Option<IsoWitness> {
        if depth == self.order.len() {
            let phi: Vec<usize> = phi.iter().map(|x| x.unwrap()).collect();
            return self.match_edges(&phi);
        }
        let v = self.order[depth];
        for w in 0..self.g2.vertex_count() {
            if used[w] || self.sig1[v] != self.sig2[w] {
                continue;
            }
            phi[v] = Some(w);
            used[w] = true;
            if self.local_keys1(v, phi) == self.local_keys2(w, used) {
                if let Some(found) = self.extend(depth + 1, phi, used) {
                    return Some(found);
                }
            }
            phi[v] = None;
            used[w] = false;
        }
        None
    }

    /// Given a vertex bijection, finds a half-edge bijection; in sign mode it
    /// must also satisfy the parity constraints that make the sign
    /// discrepancy a product of vertex and edge sign changes.
    fn match_edges(&self, phi: &[usize]) -> Option<IsoWitness> {
        let m = self.g1.edge_count();
        let mut assigned: Vec<Option<HalfEdge>> = vec![None; m];
        let mut taken = vec![false; self.g2.edge_count()];
        let mut parity = Parity::new(self.g1.vertex_count());
        if !self.assign_edge(0, phi, &mut assigned, &mut taken, &mut parity) {
            return None;
        }
        let mut vertices = BTreeMap::new();
        for (v, &w) in phi.iter().enumerate() {
            vertices.insert(self.g1.vertex_name(v).to_string(), self.g2.vertex_name(w).to_string());
        }
        let mut half_edges = BTreeMap::new();
        for (i, img) in assigned.iter().enumerate() {
            let h = HalfEdge::new(i, true);
            let img = img.unwrap();
            half_edges.insert(self.g1.half_edge_name(h), self.g2.half_edge_name(img));
            half_edges.insert(self.g1.half_edge_name(h.reverse()), self.g2.half_edge_name(img.reverse()));
        }
        Some(IsoWitness { vertices, half_edges })
    }

    fn assign_edge(
        &self,
        i: usize,
        phi: &[usize],
        assigned: &mut Vec<Option<HalfEdge>>,
        taken: &mut Vec<bool>,
        parity: &mut Parity,
    ) -> bool {
        if i == self.g1.edge_count() {
            return true;
        }
        let h = HalfEdge::new(i, true);
        let (a, b) = (self.g1.label(h), self.g1.label(h.reverse()));
        let (x, y) = (self.g1.origin(h), self.g1.terminus(h));
        let mut tried_exact = false;
        for j in 0..self.g2.edge_count() {
            if taken[j] {
                continue;
            }
            for forward in [true, false] {
                let k = HalfEdge::new(j, forward);
                if self.g2.origin(k) != phi[x] || self.g2.terminus(k) != phi[y] {
                    continue;
                }
                let (c, d) = (self.g2.label(k), self.g2.label(k.reverse()));
                let ok = match self.mode {
                    IsoMode::Exact => a == c && b == d,
                    IsoMode::UpToSignChange => a.abs() == c.abs() && b.abs() == d.abs(),
                };
                if !ok {
                    continue;
                }
                if self.mode == IsoMode::Exact {
                    // Exact matches within a class are interchangeable.
                    if tried_exact {
                        continue;
                    }
                    tried_exact = true;
                }
                let flip = (a.signum() * c.signum()) * (b.signum() * d.signum()) < 0;
                let mark = parity.mark();
                if parity.relate(x, y, flip) {
                    taken[j] = true;
                    assigned[i] = Some(k);
                    if self.assign_edge(i + 1, phi, assigned, taken, parity) {
                        return true;
                    }
                    taken[j] = false;
                    assigned[i] = None;
                }
                parity.rollback(mark);
            }
        }
        false
    }
}

/// Union-find with parity and rollback: records constraints `s(x) s(y) = ±1`.
struct Parity {
    parent: Vec<usize>,
    rel: Vec<bool>,
    size: Vec<usize>,
    history: Vec<(usize, usize)>,
}

impl Parity {
    fn new(n: usize) -> Parity {
        Parity { parent: (0..n).collect(), rel: vec![false; n], size: vec![1; n], history: Vec::new() }
    }

    fn find(&self, mut x: usize) -> (usize, bool) {
        let mut p = false;
        while self.parent[x] != x {
            p ^= self.rel[x];
            x = self.parent[x];
        }
        (x, p)
    }

    fn mark(&self) -> usize {
        self.history.len()
    }

    fn relate(&mut self, x: usize, y: usize, flip: bool) -> bool {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            return (px ^ py) == flip;
        }
        let (big, small) = if self.size[rx] >= self.size[ry] { (rx, ry) } else { (ry, rx) };
        self.parent[small] = big;
        self.rel[small] = px ^ py ^ flip;
        self.size[big] += self.size[small];
        self.history.push((small, big));
        true
    }

    fn rollback(&mut self, mark: usize) {
        while self.history.len() > mark {
            let (small, big) = self.history.pop().unwrap();
            self.parent[small] = small;
            self.rel[small] = false;
            self.size[big] -= self.size[small];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: &[&str], e: &[(&str, &str, &str, i64, i64)]) -> LabeledGraph {
        LabeledGraph::from_tuples(v, e).unwrap()
    }

    #[test]
    fn graph_is_isomorphic_to_itself() {
        let a = g(&["x", "y"], &[("s", "x", "y", 2, 3), ("t", "y", "y", 1, 4), ("r", "x", "y", 5, 1)]);
        assert!(isomorphic(&a, &a, IsoMode::Exact).unwrap().is_some());
    }

    #[test]
    fn loop_reads_the_same_from_either_end() {
        let a = g(&["v"], &[("t", "v", "v", 2, 4)]);
        let b = g(&["w"], &[("s", "w", "w", 4, 2)]);
        assert!(isomorphic(&a, &b, IsoMode::Exact).unwrap().is_some());
    }

    #[test]
    fn different_labels_are_not_isomorphic() {
        let a = g(&["v"], &[("t", "v", "v", 1, 2)]);
        let b = g(&["v"], &[("t", "v", "v", 1, 3)]);
        assert!(isomorphic(&a, &b, IsoMode::Exact).unwrap().is_none());
    }

    #[test]
    fn sign_mode_respects_orientation_character() {
        let plus = g(&["v"], &[("t", "v", "v", 1, 1)]);
        let minus = g(&["v"], &[("t", "v", "v", 1, -1)]);
        let both_neg = g(&["v"], &[("t", "v", "v", -1, -1)]);
        assert!(isomorphic(&plus, &minus, IsoMode::UpToSignChange).unwrap().is_none());
        assert!(isomorphic(&plus, &both_neg, IsoMode::UpToSignChange).unwrap().is_some());
        assert!(isomorphic(&plus, &both_neg, IsoMode::Exact).unwrap().is_none());
    }

    #[test]
    fn sign_mode_accepts_vertex_flips() {
        let a = g(&["x", "y"], &[("s", "x", "y", 2, 3), ("t", "x", "y", 1, 3)]);
        let b = a.vertex_sign_change("y").unwrap();
        assert!(isomorphic(&a, &b, IsoMode::UpToSignChange).unwrap().is_some());
        assert!(isomorphic(&a, &b, IsoMode::Exact).unwrap().is_none());
        let c = g(&["x", "y"], &[("s", "x", "y", 2, -3), ("t", "x", "y", 1, 3)]);
        assert!(isomorphic(&a, &c, IsoMode::UpToSignChange).unwrap().is_none());
    }

    #[test]
    fn oversized_inputs_are_refused() {
        let names: Vec<String> = (0..13).map(|i| format!("v{i:02}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let edges: Vec<(String, String, String)> =
            (0..12).map(|i| (format!("e{i:02}"), names[i].clone(), names[i + 1].clone())).collect();
        let tuples: Vec<(&str, &str, &str, i64, i64)> =
            edges.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str(), 1, 2)).collect();
        let big = g(&refs, &tuples);
        assert!(matches!(isomorphic(&big, &big, IsoMode::Exact), Err(GbsError::Refused(_))));
    }
}
