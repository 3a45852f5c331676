use super::LabeledGraph;
use crate::deform::reduce;
use crate::error::GbsResult;

/// Outcome of the sufficient test for non-elementarity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonElementary {
    pub certified: bool,
    pub reason: String,
}

/// Collapses greedily, then certifies when some vertex of the reduced graph
/// has Bass–Serre tree valence at least 3. A reduced graph has no tree
/// leaves, so the tree is then not a line.
pub fn certify_non_elementary(g: &LabeledGraph) -> GbsResult<NonElementary> {
    g.ensure_valid()?;
    let r = reduce(g)?;
    let best = (0..r.vertex_count()).max_by_key(|&v| (r.tree_valence(v), std::cmp::Reverse(v)));
    Ok(match best {
        Some(v) if r.tree_valence(v) >= 3 => NonElementary {
            certified: true,
            reason: format!(
                "after collapses, vertex `{}` has tree valence {}",
                r.vertex_name(v),
                r.tree_valence(v)
            ),
        },
        _ => NonElementary {
            certified: false,
            reason: "after collapses every vertex has tree valence at most 2; the group may be elementary".into(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(v: &[&str], e: &[(&str, &str, &str, i64, i64)]) -> bool {
        certify_non_elementary(&LabeledGraph::from_tuples(v, e).unwrap()).unwrap().certified
    }

    #[test]
    fn elementary_shapes_are_not_certified() {
        assert!(!check(&["v"], &[]));
        assert!(!check(&["v"], &[("t", "v", "v", 1, 1)]));
        assert!(!check(&["v"], &[("t", "v", "v", 1, -1)]));
        assert!(!check(&["u", "w"], &[("s", "u", "w", 2, 2)]));
        assert!(!check(&["u", "w"], &[("s", "u", "w", 1, 5)]));
    }

    #[test]
    fn non_elementary_shapes_are_certified() {
        assert!(check(&["v"], &[("t", "v", "v", 1, 2)]));
        assert!(check(&["v"], &[("a", "v", "v", 1, 1), ("b", "v", "v", 1, 1)]));
        assert!(check(&["u", "w"], &[("s", "u", "w", 2, 3)]));
        assert!(check(&["v"], &[("a", "v", "v", 3, 3), ("b", "v", "v", 2, 2)]));
    }
}
