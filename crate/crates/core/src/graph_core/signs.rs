use num_traits::Signed;

use super::{HalfEdge, LabeledGraph};
use crate::error::{GbsError, GbsResult};

/// An admissible sign change, named by vertex id or edge id.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SignChange {
    Vertex(String),
    Edge(String),
}

impl SignChange {
    pub fn apply(&self, g: &LabeledGraph) -> GbsResult<LabeledGraph> {
        match self {
            SignChange::Vertex(v) => g.vertex_sign_change(v),
            SignChange::Edge(e) => g.edge_sign_change(e),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignNormalization {
    pub graph: LabeledGraph,
    pub moves: Vec<SignChange>,
}

/// True iff every fundamental cycle has positive modulus.
pub fn orientation_character_trivial(g: &LabeledGraph) -> GbsResult<bool> {
    g.ensure_valid()?;
    Ok(first_negative_cycle(g)?.is_none())
}

fn first_negative_cycle(g: &LabeledGraph) -> GbsResult<Option<Vec<HalfEdge>>> {
    for c in g.fundamental_cycles() {
        if g.path_modulus(&c)?.is_negative() {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Makes every label positive by vertex sign changes along a BFS spanning
/// tree followed by edge sign changes on the remaining pairs.
pub fn make_labels_positive(g: &LabeledGraph) -> GbsResult<SignNormalization> {
    g.ensure_valid()?;
    if let Some(c) = first_negative_cycle(g)? {
        return Err(GbsError::NontrivialOrientation {
            witness: c.iter().map(|&h| g.half_edge_name(h)).collect(),
        });
    }
    let parent = g.spanning_tree();
    let mut order = Vec::new();
    // BFS order of vertices other than the root, reconstructed from depth.
    let mut depth = vec![usize::MAX; g.vertex_count()];
    depth[0] = 0;
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &v in &frontier {
            for &h in g.incident(v) {
                let w = g.terminus(h);
                if parent[w] == Some(h) && depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    next.push(w);
                    order.push(w);
                }
            }
        }
        frontier = next;
    }
    let mut cur = g.clone();
    let mut moves = Vec::new();
    for w in order {
        let h = parent[w].expect("non-root vertex has a tree edge");
        if cur.label(h) < 0 {
            let m = SignChange::Edge(cur.edges()[h.edge()].id.clone());
            cur = m.apply(&cur)?;
            moves.push(m);
        }
        if cur.label(h.reverse()) < 0 {
            let m = SignChange::Vertex(cur.vertex_name(w).to_string());
            cur = m.apply(&cur)?;
            moves.push(m);
        }
    }
    for i in 0..cur.edge_count() {
        let h = HalfEdge::new(i, true);
        let (a, b) = (cur.label(h), cur.label(h.reverse()));
        if a < 0 && b < 0 {
            let m = SignChange::Edge(cur.edges()[i].id.clone());
            cur = m.apply(&cur)?;
            moves.push(m);
        } else if a < 0 || b < 0 {
            // Unreachable when every fundamental cycle is positive.
            return Err(GbsError::NontrivialOrientation { witness: vec![cur.edges()[i].id.clone()] });
        }
    }
    Ok(SignNormalization { graph: cur, moves })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_loop_flips_by_edge_change() {
        let g = LabeledGraph::from_tuples(&["v"], &[("t", "v", "v", -2, -4)]).unwrap();
        let r = make_labels_positive(&g).unwrap();
        assert_eq!(r.moves, vec![SignChange::Edge("t".into())]);
        assert_eq!(r.graph, LabeledGraph::from_tuples(&["v"], &[("t", "v", "v", 2, 4)]).unwrap());
    }

    #[test]
    fn klein_bottle_loop_fails_with_witness() {
        let g = LabeledGraph::from_tuples(&["v"], &[("t", "v", "v", 1, -1)]).unwrap();
        assert!(!orientation_character_trivial(&g).unwrap());
        match make_labels_positive(&g) {
            Err(GbsError::NontrivialOrientation { witness }) => assert_eq!(witness, vec!["t"]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tree_with_mixed_signs_is_trivial() {
        let g = LabeledGraph::from_tuples(&["a", "b", "c"], &[("x", "a", "b", -3, 5), ("y", "b", "c", 2, -7)])
            .unwrap();
        assert!(orientation_character_trivial(&g).unwrap());
    }

    #[test]
    fn segment_is_made_positive_and_log_replays() {
        let g = LabeledGraph::from_tuples(&["a", "b"], &[("x", "a", "b", -3, 5)]).unwrap();
        let r = make_labels_positive(&g).unwrap();
        assert!(r.graph.all_labels_positive());
        let mut replay = g.clone();
        for m in &r.moves {
            replay = m.apply(&replay).unwrap();
        }
        assert_eq!(replay, r.graph);
        assert_eq!(r.graph, LabeledGraph::from_tuples(&["a", "b"], &[("x", "a", "b", 3, 5)]).unwrap());
    }
}
