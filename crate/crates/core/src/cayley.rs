//! The graph `Δ` on one vertex orbit of a ball in `X_{(A,λ)}`: `u ~ w` when a
//! 1-skeleton edge `e` has `u` nearest to `∂₀e` and `w` nearest to `∂₁e`
//! among the orbit.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write;

use crate::bass_serre::{rooted_isomorphism, ColoredGraph, ComplexBall};
use crate::error::{GbsError, GbsResult};

/// The two vertex classes of a bipartite two-vertex graph: white is the
/// vertex `v`, black the vertex `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColorClass {
    White,
    Black,
}

impl ColorClass {
    pub fn parse(s: &str) -> GbsResult<ColorClass> {
        match s.to_ascii_lowercase().as_str() {
            "white" => Ok(ColorClass::White),
            "black" => Ok(ColorClass::Black),
            other => Err(GbsError::Constraint(format!("unknown color class `{other}` (expected white or black)"))),
        }
    }

    pub fn vertex_name(self) -> &'static str {
        match self {
            ColorClass::White => "v",
            ColorClass::Black => "u",
        }
    }
}

#[derive(Clone, Debug)]
pub struct DeltaGraph {
    /// Ball point index of each vertex of `Δ`.
    pub points: Vec<usize>,
    pub adj: Vec<BTreeSet<usize>>,
    /// Largest distance from a point of the complex to the orbit.
    pub c: usize,
    /// Vertices whose neighbourhood in `Δ` is exact: their distance to the
    /// incomplete part of the ball exceeds `interior_radius`.
    pub interior: Vec<bool>,
    pub interior_radius: usize,
    /// The vertex closest to the root of the ball.
    pub root: usize,
}

/// Builds `Δ` on the points lying over graph vertex `vertex`. Points over one
/// graph vertex form one orbit, so `C` is read off at the point over each
/// graph vertex nearest the root. Edges are taken only from points farther
/// than `C` from the incomplete part of the ball, where ball distances to the
/// orbit are exact.
pub fn build_delta(ball: &ComplexBall, vertex: &str) -> GbsResult<DeltaGraph> {
    let g = &ball.graph;
    let v0 = g.require_vertex(vertex)?;
    let sk = ball.skeleton();
    let n = sk.len();
    let orbit: Vec<usize> = (0..n).filter(|&i| ball.point_vertex(i) == v0).collect();
    if orbit.is_empty() {
        return Err(GbsError::Refused(format!("ball has no points over `{vertex}`")));
    }
    let incomplete: Vec<usize> = (0..n).filter(|&i| !ball.complete[i]).collect();
    let to_boundary: Vec<usize> = if incomplete.is_empty() {
        vec![usize::MAX; n]
    } else {
        sk.multi_source_distances(&incomplete).into_iter().map(|d| d.unwrap_or(usize::MAX)).collect()
    };
    let d0: Vec<usize> = sk.multi_source_distances(&orbit).into_iter().map(|d| d.unwrap_or(usize::MAX)).collect();
    let radius = ball_radius(ball);
    let ball_root_dist = sk.distances(ball.root);
    let mut c = 0;
    for w in 0..g.vertex_count() {
        let Some(x) = (0..n).filter(|&i| ball.point_vertex(i) == w).min_by_key(|&i| (ball_root_dist[i], i)) else {
            continue;
        };
        if d0[x] > to_boundary[x] {
            return Err(GbsError::Refused(format!(
                "ball too small: the distance from `{}` points to the orbit is not determined at radius {radius}",
                g.vertex_name(w)
            )));
        }
        c = c.max(d0[x]);
    }
    if 2 * c > radius {
        return Err(GbsError::Refused(format!(
            "ball too small: orbit distance constant C = {c} exceeds half the radius {radius}"
        )));
    }
    let reliable = |i: usize| to_boundary[i] > c;

    // Nearest orbit points, layer by layer.
    let mut near: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut order: Vec<usize> = (0..n).filter(|&i| d0[i] != usize::MAX).collect();
    order.sort_by_key(|&i| d0[i]);
    let mut delta_index = vec![usize::MAX; n];
    for (k, &p) in orbit.iter().enumerate() {
        delta_index[p] = k;
        near[p].insert(k);
    }
    for &x in &order {
        if d0[x] == 0 {
            continue;
        }
        let mut acc = BTreeSet::new();
        for &(_, y) in &sk.adj[x] {
            if d0[y] + 1 == d0[x] {
                acc.extend(near[y].iter().copied());
            }
        }
        near[x] = acc;
    }

    let mut adj = vec![BTreeSet::new(); orbit.len()];
    for x in 0..n {
        if !reliable(x) {
            continue;
        }
        for &(_, y) in &sk.adj[x] {
            if !reliable(y) {
                continue;
            }
            for &a in &near[x] {
                for &b in &near[y] {
                    if a != b {
                        adj[a].insert(b);
                        adj[b].insert(a);
                    }
                }
            }
        }
    }
    let interior_radius = 2 * c + 1;
    let interior = orbit.iter().map(|&p| to_boundary[p] > interior_radius).collect();
    let root = (0..orbit.len())
        .min_by_key(|&k| (ball_root_dist[orbit[k]].unwrap_or(usize::MAX), k))
        .expect("orbit is nonempty");
    Ok(DeltaGraph { points: orbit, adj, c, interior, interior_radius, root })
}

fn ball_radius(ball: &ComplexBall) -> usize {
    match ball.shape {
        crate::bass_serre::BallShape::Metric { radius } => radius,
        crate::bass_serre::BallShape::TreeWindow { radius, .. } => radius,
    }
}

impl DeltaGraph {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Distinct degrees over interior vertices.
    pub fn interior_degrees(&self) -> BTreeSet<usize> {
        (0..self.len()).filter(|&i| self.interior[i]).map(|i| self.degree(i)).collect()
    }

    pub fn distances(&self, from: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[from] = Some(0);
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap() + 1;
            for &y in &self.adj[x] {
                if dist[y].is_none() {
                    dist[y] = Some(d);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Whether the interior vertices lie in one component of the subgraph
    /// they induce.
    pub fn interior_connected(&self) -> bool {
        let inner: Vec<usize> = (0..self.len()).filter(|&i| self.interior[i]).collect();
        let Some(&start) = inner.first() else { return true };
        let mut seen = vec![false; self.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if self.interior[y] && !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        inner.iter().all(|&i| seen[i])
    }

    /// Largest `r` such that every vertex within distance `r` of `i` is
    /// interior, so the radius-`r` ball around `i` is exact.
    pub fn certified_radius(&self, i: usize) -> usize {
        if !self.interior[i] {
            return 0;
        }
        let dist = self.distances(i);
        let mut worst = usize::MAX;
        for (j, d) in dist.iter().enumerate() {
            if let Some(d) = d {
                if !self.interior[j] {
                    worst = worst.min(*d);
                }
            }
        }
        worst.saturating_sub(1).min(self.len())
    }

    pub fn to_colored(&self) -> ColoredGraph {
        let mut g = ColoredGraph::new(self.len());
        for (a, nb) in self.adj.iter().enumerate() {
            for &b in nb {
                if a < b {
                    g.add_undirected(a, b, 0);
                }
            }
        }
        g
    }

    /// The ball of radius `r` around `i`, with `i` as vertex 0.
    pub fn rooted_ball(&self, i: usize, r: usize) -> ColoredGraph {
        self.to_colored().ball(i, r)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph delta {\n  node [shape=point];\n");
        for (i, &inner) in self.interior.iter().enumerate() {
            let _ = writeln!(s, "  d{i} [color={}];", if inner { "black" } else { "gray" });
        }
        for (a, nb) in self.adj.iter().enumerate() {
            for &b in nb {
                if a < b {
                    let _ = writeln!(s, "  d{a} -- d{b};");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Compares the radius-`r` balls of `Δ` around the two roots. Refuses when
/// either ball is not certified exact.
pub fn delta_balls_isomorphic(d1: &DeltaGraph, d2: &DeltaGraph, r: usize) -> GbsResult<bool> {
    for (name, d) in [("first", d1), ("second", d2)] {
        let cert = d.certified_radius(d.root);
        if cert < r {
            return Err(GbsError::Refused(format!(
                "{name} Δ is exact only to radius {cert} around its root; radius {r} requested"
            )));
        }
    }
    Ok(rooted_isomorphism(&d1.rooted_ball(d1.root, r), 0, &d2.rooted_ball(d2.root, r), 0).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bass_serre::build_metric_ball;
    use crate::graph_core::{make_example, Family};

    #[test]
    fn g1_delta_is_symmetric_with_constant_interior_degree() {
        let ex = make_example(Family::G1 { k: 2, n: 2 }).unwrap();
        let ball = build_metric_ball(&ex.graph, ex.plus.as_ref().unwrap(), "v", 8).unwrap();
        let d = build_delta(&ball, "v").unwrap();
        for (a, nb) in d.adj.iter().enumerate() {
            assert!(!nb.contains(&a));
            for &b in nb {
                assert!(d.adj[b].contains(&a));
            }
        }
        assert!(d.interior.iter().any(|&x| x));
        assert_eq!(d.interior_degrees().len(), 1, "{:?}", d.interior_degrees());
        assert!(d.interior_connected());
    }

    #[test]
    fn small_ball_is_refused() {
        let ex = make_example(Family::G1 { k: 2, n: 2 }).unwrap();
        let ball = build_metric_ball(&ex.graph, ex.plus.as_ref().unwrap(), "v", 1).unwrap();
        assert!(matches!(build_delta(&ball, "v"), Err(GbsError::Refused(_))));
    }
}
