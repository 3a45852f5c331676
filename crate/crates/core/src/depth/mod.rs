//! Depth profiles: the truncated enumeration over closed edge paths, the
//! closed form for wedges, and the rescaling `S/r`.

mod symbolic;

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigUint;
use num_integer::Integer;

pub use symbolic::{wedge_parameters, wedge_profile, wedge_profile_of_graph, SymbolicProfile};

use crate::bass_serre::{segment_index, IndexSequence};
use crate::error::{GbsError, GbsResult};
use crate::graph_core::{certify_non_elementary, HalfEdge, LabeledGraph};
use crate::limits::Limits;

/// Depths realized by closed paths of length at most `length_bound`. A lower
/// bound for the full profile.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedProfile {
    values: Vec<u128>,
    length_bound: usize,
}

impl TruncatedProfile {
    pub fn new(values: Vec<u128>, length_bound: usize) -> GbsResult<TruncatedProfile> {
        if values.contains(&0) {
            return Err(GbsError::Profile("profile values must be positive".into()));
        }
        let set: BTreeSet<u128> = values.into_iter().collect();
        if !set.contains(&1) {
            return Err(GbsError::Profile("a depth profile always contains 1".into()));
        }
        Ok(TruncatedProfile { values: set.into_iter().collect(), length_bound })
    }

    pub fn values(&self) -> &[u128] {
        &self.values
    }

    pub fn length_bound(&self) -> usize {
        self.length_bound
    }

    pub fn max(&self) -> u128 {
        *self.values.last().unwrap_or(&1)
    }

    pub fn contains(&self, x: u128) -> bool {
        self.values.binary_search(&x).is_ok()
    }

    /// `S/r = { s / gcd(r, s) }`.
    pub fn rescale(&self, r: u128) -> GbsResult<TruncatedProfile> {
        if r == 0 {
            return Err(GbsError::Constraint("rescaling factor must be positive".into()));
        }
        let values = self.values.iter().map(|&s| s / r.gcd(&s)).collect();
        TruncatedProfile::new(values, self.length_bound)
    }
}

pub fn truncated_profile(g: &LabeledGraph, base: &str, max_len: usize) -> GbsResult<TruncatedProfile> {
    truncated_profile_with(g, base, max_len, &Limits::from_env())
}

/// Indices of unimodular closed paths at `base` of length `<= max_len`.
/// A step `e` may be followed by its reverse only when `|λ(ē)| >= 2`.
/// Prefixes are merged on `(vertex, last step, index, reverse index)`, which
/// determines every continuation.
pub fn truncated_profile_with(
    g: &LabeledGraph,
    base: &str,
    max_len: usize,
    limits: &Limits,
) -> GbsResult<TruncatedProfile> {
    g.ensure_valid()?;
    let b = g.require_vertex(base)?;
    if max_len > limits.profile_length {
        return Err(GbsError::Guard(format!(
            "path length {max_len} exceeds the limit {} (enumeration grows exponentially; set GBS_GUARD_OVERRIDE to raise it)",
            limits.profile_length
        )));
    }
    let cert = certify_non_elementary(g)?;
    if !cert.certified {
        return Err(GbsError::Refused(format!("cannot certify the group is non-elementary: {}", cert.reason)));
    }
    let abs = |h: HalfEdge| g.label(h).unsigned_abs() as u128;
    let mut found: BTreeSet<u128> = BTreeSet::from([1]);
    let mut seen: HashSet<(usize, HalfEdge, u128, u128)> = HashSet::new();
    let mut queue: VecDeque<(usize, HalfEdge, u128, u128, usize)> = VecDeque::new();
    for &h in g.incident(b) {
        let st = (g.terminus(h), h, abs(h), abs(h.reverse()));
        if max_len >= 1 && seen.insert(st) {
            queue.push_back((st.0, st.1, st.2, st.3, 1));
        }
    }
    while let Some((v, last, i, j, len)) = queue.pop_front() {
        if v == b && i == j {
            found.insert(i);
        }
        if len == max_len {
            continue;
        }
        for &h in g.incident(v) {
            if h == last.reverse() && abs(h) < 2 {
                continue;
            }
            let (i2, j2) = (abs(h), abs(h.reverse()));
            let d = j.gcd(&i2);
            let ni = i.checked_mul(i2 / d);
            let nj = j2.checked_mul(j / d);
            let (Some(ni), Some(nj)) = (ni, nj) else {
                return Err(GbsError::Overflow("segment index exceeds 128 bits".into()));
            };
            let st = (g.terminus(h), h, ni, nj);
            if seen.insert(st) {
                queue.push_back((st.0, st.1, st.2, st.3, len + 1));
            }
        }
    }
    TruncatedProfile::new(found.into_iter().collect(), max_len)
}

/// `D_V(g) = i([x, gx])`: the segment index of the path's index sequence.
pub fn depth_of_sequence(seq: &IndexSequence) -> BigUint {
    segment_index(seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_core::wedge;

    fn values(loops: &[(i64, i64)], l: usize) -> Vec<u128> {
        truncated_profile(&wedge(loops).unwrap(), "v", l).unwrap().values().to_vec()
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(values(&[(1, 2), (1, 1)], 8), vec![1, 2, 4, 8]);
        assert_eq!(values(&[(1, 4), (1, 1), (1, 1), (1, 1)], 8), vec![1, 4, 16, 64]);
        assert_eq!(values(&[(3, 3), (2, 2)], 6), vec![1, 2, 3, 6]);
    }

    #[test]
    fn refuses_elementary_and_long_paths() {
        let g = wedge(&[(1, -1)]).unwrap();
        assert!(matches!(truncated_profile(&g, "v", 6), Err(GbsError::Refused(_))));
        let g = wedge(&[(1, 2)]).unwrap();
        assert!(matches!(truncated_profile_with(&g, "v", 13, &Limits::DEFAULT), Err(GbsError::Guard(_))));
    }

    #[test]
    fn rescale_truncated() {
        let p = TruncatedProfile::new(vec![1, 2, 4, 8], 8).unwrap();
        assert_eq!(p.rescale(2).unwrap().values(), &[1, 2, 4]);
        assert_eq!(p.rescale(1).unwrap(), p);
    }
}
