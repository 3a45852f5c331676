//! Admissible branched coverings of labeled graphs.

use num_integer::Integer;

use crate::error::{GbsError, GbsResult};
use crate::graph_core::{HalfEdge, LabeledGraph};

/// A graph morphism `p: A -> B` with a degree function. `edge_map[i]` is the
/// image of the forward half-edge of source edge `i`; reverses map to reverses.
/// `edge_degree[i]` is the degree of both half-edges of edge `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchedCovering {
    pub source: LabeledGraph,
    pub target: LabeledGraph,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<HalfEdge>,
    pub vertex_degree: Vec<u64>,
    pub edge_degree: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringViolation {
    /// 1: preimage count, 2: preimage labels, 3: preimage degrees.
    pub condition: u8,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoveringReport {
    pub violations: Vec<CoveringViolation>,
}

impl CoveringReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl BranchedCovering {
    /// The identity covering of `g`, all degrees 1.
    pub fn identity(g: &LabeledGraph) -> BranchedCovering {
        BranchedCovering {
            source: g.clone(),
            target: g.clone(),
            vertex_map: (0..g.vertex_count()).collect(),
            edge_map: (0..g.edge_count()).map(|i| HalfEdge::new(i, true)).collect(),
            vertex_degree: vec![1; g.vertex_count()],
            edge_degree: vec![1; g.edge_count()],
        }
    }

    pub fn map_half_edge(&self, h: HalfEdge) -> HalfEdge {
        let img = self.edge_map[h.edge()];
        if h.is_forward() {
            img
        } else {
            img.reverse()
        }
    }

    pub fn map_path(&self, path: &[HalfEdge]) -> Vec<HalfEdge> {
        path.iter().map(|&h| self.map_half_edge(h)).collect()
    }

    pub fn half_edge_degree(&self, h: HalfEdge) -> u64 {
        self.edge_degree[h.edge()]
    }

    /// Structural checks: sizes, positivity, surjectivity and commuting with
    /// origin and reversal.
    pub fn check_structure(&self) -> GbsResult<()> {
        let (s, t) = (&self.source, &self.target);
        let err = |m: String| Err(GbsError::Covering(m));
        if self.vertex_map.len() != s.vertex_count() || self.vertex_degree.len() != s.vertex_count() {
            return err("vertex map or degrees do not cover the source vertices".into());
        }
        if self.edge_map.len() != s.edge_count() || self.edge_degree.len() != s.edge_count() {
            return err("edge map or degrees do not cover the source edges".into());
        }
        if self.vertex_map.iter().any(|&v| v >= t.vertex_count())
            || self.edge_map.iter().any(|h| h.edge() >= t.edge_count())
        {
            return err("map points outside the target".into());
        }
        if self.vertex_degree.contains(&0) || self.edge_degree.contains(&0) {
            return err("degrees must be positive".into());
        }
        for h in s.half_edges() {
            let img = self.map_half_edge(h);
            if t.origin(img) != self.vertex_map[s.origin(h)] {
                return err(format!(
                    "map does not commute with origin at half-edge `{}`",
                    s.half_edge_name(h)
                ));
            }
        }
        let mut hit_v = vec![false; t.vertex_count()];
        for &v in &self.vertex_map {
            hit_v[v] = true;
        }
        if let Some(v) = hit_v.iter().position(|&x| !x) {
            return err(format!("map is not surjective: vertex `{}` has no preimage", t.vertex_name(v)));
        }
        let mut hit_e = vec![false; t.edge_count()];
        for h in &self.edge_map {
            hit_e[h.edge()] = true;
        }
        if let Some(e) = hit_e.iter().position(|&x| !x) {
            return err(format!("map is not surjective: edge `{}` has no preimage", t.edges()[e].id));
        }
        Ok(())
    }
}

/// Checks the three admissibility conditions at every target half-edge and
/// every vertex above its origin. Structural defects are errors.
pub fn validate_covering(c: &BranchedCovering) -> GbsResult<CoveringReport> {
    c.check_structure()?;
    let (s, t) = (&c.source, &c.target);
    let mut report = CoveringReport::default();
    for e in t.half_edges() {
        let v = t.origin(e);
        let mu = t.label(e);
        for u in (0..s.vertex_count()).filter(|&u| c.vertex_map[u] == v) {
            let du = c.vertex_degree[u];
            let k = du.gcd(&mu.unsigned_abs());
            let pre: Vec<HalfEdge> = s.incident(u).iter().copied().filter(|&h| c.map_half_edge(h) == e).collect();
            let (ename, uname) = (t.half_edge_name(e), s.vertex_name(u));
            if pre.len() as u64 != k {
                report.violations.push(CoveringViolation {
                    condition: 1,
                    message: format!("{} preimages of `{ename}` at `{uname}`, expected {k}", pre.len()),
                });
            }
            let want_label = mu / k as i64;
            let want_degree = du / k;
            for h in pre {
                let hn = s.half_edge_name(h);
                if s.label(h) != want_label {
                    report.violations.push(CoveringViolation {
                        condition: 2,
                        message: format!("label of `{hn}` is {}, expected {want_label}", s.label(h)),
                    });
                }
                if c.half_edge_degree(h) != want_degree {
                    report.violations.push(CoveringViolation {
                        condition: 3,
                        message: format!("degree of `{hn}` is {}, expected {want_degree}", c.half_edge_degree(h)),
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Subgroup index: the degree sum over any fiber. Every fiber is summed and
/// the sums must agree.
pub fn covering_index(c: &BranchedCovering) -> GbsResult<u64> {
    let report = validate_covering(c)?;
    if let Some(v) = report.violations.first() {
        return Err(GbsError::Covering(format!("condition ({}) fails: {}", v.condition, v.message)));
    }
    let mut sums = vec![0u64; c.target.vertex_count()];
    for (u, &v) in c.vertex_map.iter().enumerate() {
        sums[v] = sums[v]
            .checked_add(c.vertex_degree[u])
            .ok_or_else(|| GbsError::Overflow("fiber degree sum".into()))?;
    }
    let first = sums[0];
    if let Some(v) = sums.iter().position(|&x| x != first) {
        return Err(GbsError::Covering(format!(
            "index not well-defined: fiber of `{}` sums to {first}, fiber of `{}` to {}",
            c.target.vertex_name(0),
            c.target.vertex_name(v),
            sums[v]
        )));
    }
    Ok(first)
}

/// `second ∘ first`, degrees multiplied along the map.
pub fn compose(first: &BranchedCovering, second: &BranchedCovering) -> GbsResult<BranchedCovering> {
    if first.target != second.source {
        return Err(GbsError::Covering("target of the first covering is not the source of the second".into()));
    }
    let mul = |a: u64, b: u64| a.checked_mul(b).ok_or_else(|| GbsError::Overflow("composite degree".into()));
    let vertex_map = first.vertex_map.iter().map(|&v| second.vertex_map[v]).collect();
    let edge_map = first.edge_map.iter().map(|&h| second.map_half_edge(h)).collect();
    let vertex_degree = first
        .vertex_map
        .iter()
        .zip(&first.vertex_degree)
        .map(|(&v, &d)| mul(d, second.vertex_degree[v]))
        .collect::<GbsResult<Vec<_>>>()?;
    let edge_degree = first
        .edge_map
        .iter()
        .zip(&first.edge_degree)
        .map(|(h, &d)| mul(d, second.edge_degree[h.edge()]))
        .collect::<GbsResult<Vec<_>>>()?;
    Ok(BranchedCovering {
        source: first.source.clone(),
        target: second.target.clone(),
        vertex_map,
        edge_map,
        vertex_degree,
        edge_degree,
    })
}
