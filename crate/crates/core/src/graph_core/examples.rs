use num_integer::Integer;

use super::{DirectedStructure, EdgeSpec, HalfEdge, LabeledGraph};
use crate::covering::BranchedCovering;
use crate::error::{GbsError, GbsResult};

/// Named graph families. `G1`–`G4` are lattices in `Aut(X_{k,kn})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Bs { m: i64, n: i64 },
    G1 { k: i64, n: i64 },
    G2 { k: i64, n: i64 },
    G3 { k: i64, n: i64, p: i64 },
    G4 { k: i64, n: i64 },
    H2Cover { k: i64, n: i64 },
    /// `BS(1,n)` wedged with `k-1` copies of `BS(1,1)`.
    G1PrimeWedge { k: i64, n: i64 },
}

impl Family {
    /// Parses a family name (`bs`, `g1`, `g2`, `g3`, `g4`, `h2cover`,
    /// `g1prime-wedge`) with its integer parameters in order.
    pub fn parse(name: &str, params: &[i64]) -> GbsResult<Family> {
        let need = |n: usize| -> GbsResult<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(GbsError::Constraint(format!("family {name} takes {n} parameters, got {}", params.len())))
            }
        };
        let f = match name.to_ascii_lowercase().as_str() {
            "bs" => {
                need(2)?;
                Family::Bs { m: params[0], n: params[1] }
            }
            "g1" => {
                need(2)?;
                Family::G1 { k: params[0], n: params[1] }
            }
            "g2" => {
                need(2)?;
                Family::G2 { k: params[0], n: params[1] }
            }
            "g3" => {
                need(3)?;
                Family::G3 { k: params[0], n: params[1], p: params[2] }
            }
            "g4" => {
                need(2)?;
                Family::G4 { k: params[0], n: params[1] }
            }
            "h2cover" | "h2" => {
                need(2)?;
                Family::H2Cover { k: params[0], n: params[1] }
            }
            "g1prime-wedge" | "g1prime" => {
                need(2)?;
                Family::G1PrimeWedge { k: params[0], n: params[1] }
            }
            other => return Err(GbsError::Constraint(format!("unknown family `{other}`"))),
        };
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Example {
    pub graph: LabeledGraph,
    pub plus: Option<DirectedStructure>,
    pub covering: Option<BranchedCovering>,
}

fn constraint(ok: bool, msg: &str) -> GbsResult<()> {
    if ok {
        Ok(())
    } else {
        Err(GbsError::Constraint(msg.to_string()))
    }
}

fn all_reverse_plus(g: &LabeledGraph) -> DirectedStructure {
    DirectedStructure::from_forward_flags(vec![false; g.edge_count()])
}

pub fn make_example(family: Family) -> GbsResult<Example> {
    let plain = |graph: LabeledGraph, directed: bool| {
        let plus = directed.then(|| all_reverse_plus(&graph));
        Example { graph, plus, covering: None }
    };
    match family {
        Family::Bs { m, n } => {
            constraint(m != 0 && n != 0, "BS(m,n) needs nonzero m and n")?;
            let g = LabeledGraph::from_tuples(&["v"], &[("t", "v", "v", m, n)])?;
            Ok(plain(g, true))
        }
        Family::G1 { k, n } => {
            constraint(k > 1 && n > 1, "G1 needs k > 1 and n > 1")?;
            let g = LabeledGraph::from_tuples(&["u", "v"], &[("e", "v", "u", k, k * n), ("f", "u", "v", k, k * n)])?;
            Ok(plain(g, true))
        }
        Family::G2 { k, n } => {
            constraint(k > 1 && n > 1, "G2 needs k > 1 and n > 1")?;
            Ok(plain(g2_graph(k, n)?, true))
        }
        Family::G3 { k, n, p } => {
            constraint(k > 1 && n > 1, "G3 needs k > 1 and n > 1")?;
            constraint(p > 1 && p < k, "G3 needs 1 < p < k")?;
            constraint(n % p == 0, "G3 needs p to divide n")?;
            constraint(p != n, "G3 needs p != n")?;
            let mut edges = Vec::new();
            for i in 1..=k {
                edges.push(EdgeSpec::new(&format!("e{i}"), "u", "v", 1, n));
            }
            edges.push(EdgeSpec::new("f0", "v", "u", p, p * n));
            for i in 1..=(k - p) {
                edges.push(EdgeSpec::new(&format!("f{i}"), "v", "u", 1, n));
            }
            Ok(plain(LabeledGraph::new(&["u", "v"], &edges)?, true))
        }
        Family::G4 { k, n } => {
            constraint(n > 1 && n < k, "G4 needs 1 < n < k")?;
            constraint(k % n == 1, "G4 needs k = 1 mod n")?;
            let mut edges = Vec::new();
            for i in 1..=k {
                edges.push(EdgeSpec::new(&format!("e{i}"), "u", "v", 1, n));
            }
            edges.push(EdgeSpec::new("f0", "v", "u", 1, n));
            for i in 1..=((k - 1) / n) {
                edges.push(EdgeSpec::new(&format!("f{i}"), "v", "u", n, n * n));
            }
            Ok(plain(LabeledGraph::new(&["u", "v"], &edges)?, true))
        }
        Family::H2Cover { k, n } => {
            constraint(k > 1 && n > 1, "H2 cover needs k > 1 and n > 1")?;
            let cover = h2_cover(k, n)?;
            Ok(Example { graph: cover.source.clone(), plus: None, covering: Some(cover) })
        }
        Family::G1PrimeWedge { k, n } => {
            constraint(k > 1 && n > 1, "G1' wedge needs k > 1 and n > 1")?;
            let mut loops = vec![(1, n)];
            loops.extend(std::iter::repeat((1, 1)).take((k - 1) as usize));
            Ok(plain(wedge(&loops)?, false))
        }
    }
}

fn g2_graph(k: i64, n: i64) -> GbsResult<LabeledGraph> {
    let mut edges = vec![EdgeSpec::new("e0", "v", "u", k, k * n)];
    for i in 1..=k {
        edges.push(EdgeSpec::new(&format!("e{i}"), "u", "v", 1, n));
    }
    LabeledGraph::new(&["u", "v"], &edges)
}

/// The covering of the `G2(k,n)` graph defining `H2`: one vertex `v1` over
/// `v`, vertices `u1..ub` over `u`, with `b = gcd(k,n)`, `a = k/b`, `c = n/b`.
fn h2_cover(k: i64, n: i64) -> GbsResult<BranchedCovering> {
    let b = k.gcd(&n);
    let (a, c) = (k / b, n / b);
    let target = g2_graph(k, n)?;
    let mut vertices = vec!["v1".to_string()];
    let mut edges = Vec::new();
    let mut images = Vec::new();
    let mut degrees = Vec::new();
    for i in 1..=b {
        let ui = format!("u{i}");
        vertices.push(ui.clone());
        for j in 1..=k {
            let id = format!("e{j}_{i}");
            edges.push(EdgeSpec::new(&id, &ui, "v1", 1, c));
            images.push((id, format!("e{j}")));
            degrees.push(a as u64);
        }
        for s in 1..=a {
            let id = format!("e0_{i}_{s}");
            edges.push(EdgeSpec::new(&id, "v1", &ui, 1, b * b * c));
            images.push((id, "e0".to_string()));
            degrees.push(1);
        }
    }
    let source = LabeledGraph::new(&vertices, &edges)?;
    let mut edge_map = vec![HalfEdge::new(0, true); source.edge_count()];
    let mut edge_degree = vec![0; source.edge_count()];
    for ((id, img), d) in images.iter().zip(degrees) {
        let i = source.edge_index(id).expect("edge just inserted");
        edge_map[i] = target.require_half_edge(img)?;
        edge_degree[i] = d;
    }
    let v = target.require_vertex("v")?;
    let u = target.require_vertex("u")?;
    let vertex_map = source.vertices().iter().map(|name| if name == "v1" { v } else { u }).collect();
    let vertex_degree =
        source.vertices().iter().map(|name| if name == "v1" { k as u64 } else { a as u64 }).collect();
    Ok(BranchedCovering { source, target, vertex_map, edge_map, vertex_degree, edge_degree })
}

/// One vertex `v` with a loop `l01, l02, ...` per label pair.
pub fn wedge(loops: &[(i64, i64)]) -> GbsResult<LabeledGraph> {
    let edges: Vec<EdgeSpec> = loops
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| EdgeSpec::new(&format!("l{:02}", i + 1), "v", "v", a, b))
        .collect();
    LabeledGraph::new(&["v"], &edges)
}

/// The connected covering of the `BS(m,n)` loop with a single vertex of
/// degree `d`. Needs `gcd(d,m) = gcd(d,n)`.
pub fn bs_vertex_cover(m: i64, n: i64, d: u64) -> GbsResult<BranchedCovering> {
    constraint(m != 0 && n != 0 && d > 0, "bs_vertex_cover needs nonzero m, n, d")?;
    let g1 = (d as i64).gcd(&m);
    let g2 = (d as i64).gcd(&n);
    constraint(g1 == g2, "bs_vertex_cover needs gcd(d,m) = gcd(d,n)")?;
    let target = LabeledGraph::from_tuples(&["v"], &[("t", "v", "v", m, n)])?;
    let edges: Vec<EdgeSpec> =
        (1..=g1).map(|i| EdgeSpec::new(&format!("t{i}"), "w", "w", m / g1, n / g1)).collect();
    let source = LabeledGraph::new(&["w"], &edges)?;
    let t = target.require_half_edge("t")?;
    Ok(BranchedCovering {
        vertex_map: vec![0],
        edge_map: vec![t; source.edge_count()],
        vertex_degree: vec![d],
        edge_degree: vec![d / g1 as u64; source.edge_count()],
        source,
        target,
    })
}
