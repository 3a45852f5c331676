//! Independent oracles for segment indices and truncated profiles, plus frozen
//! values they produced.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gbs_core::bass_serre::{
    concat_indices, fixes_segment, reverse_index, segment_index, segment_index_brute_force, IndexSequence,
};
use gbs_core::depth::{depth_of_sequence, truncated_profile};
use gbs_core::graph_core::{make_example, wedge, Family};
use gbs_core::{HalfEdge, LabeledGraph};

fn seq(pairs: &[(u64, u64)]) -> IndexSequence {
    IndexSequence::new(pairs.to_vec()).unwrap()
}

/// Least `r` with `N_l | r * M_{l-1}` for every prefix, by direct scan.
fn oracle_index(pairs: &[(u64, u64)]) -> u128 {
    let mut prefix = Vec::new();
    let (mut big_n, mut big_m) = (1u128, 1u128);
    for &(n, m) in pairs {
        big_n *= n as u128;
        prefix.push((big_n, big_m));
        big_m *= m as u128;
    }
    (1..).find(|r| prefix.iter().all(|&(nl, ml)| (r * ml) % nl == 0)).unwrap()
}

fn random_pairs(rng: &mut ChaCha8Rng, max_len: usize, max_entry: u64) -> Vec<(u64, u64)> {
    let len = rng.gen_range(1..=max_len);
    (0..len).map(|_| (rng.gen_range(1..=max_entry), rng.gen_range(1..=max_entry))).collect()
}

#[test]
fn closed_form_matches_scan_oracle_up_to_twelve() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20_000 {
        let p = random_pairs(&mut rng, 6, 12);
        let s = seq(&p);
        let want = oracle_index(&p);
        assert_eq!(segment_index(&s).to_u128().unwrap(), want, "{p:?}");
        assert_eq!(segment_index_brute_force(&s, want).unwrap(), want, "{p:?}");
        assert_eq!(depth_of_sequence(&s), segment_index(&s));
    }
}

#[test]
fn frozen_segment_indices() {
    assert_eq!(segment_index(&seq(&[(2, 3), (4, 5)])), BigUint::from(8u32));
    assert_eq!(segment_index(&seq(&[(2, 1), (2, 1)])), BigUint::from(4u32));
    assert_eq!(reverse_index(&seq(&[(1, 2), (1, 2)])), BigUint::from(4u32));
    assert_eq!(segment_index(&seq(&[(2, 2), (3, 3)])), BigUint::from(6u32));
    assert_eq!(reverse_index(&seq(&[(2, 2), (3, 3)])), BigUint::from(6u32));
}

#[test]
fn concatenation_is_coherent() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..5000 {
        let a = seq(&random_pairs(&mut rng, 4, 9));
        let b = seq(&random_pairs(&mut rng, 4, 9));
        let ab = a.concat(&b);
        let (ia, ja) = (segment_index(&a), reverse_index(&a));
        let (ib, jb) = (segment_index(&b), reverse_index(&b));
        let two = seq(&[(ia.to_u64().unwrap(), ja.to_u64().unwrap()), (ib.to_u64().unwrap(), jb.to_u64().unwrap())]);
        assert_eq!(segment_index(&ab), segment_index(&two), "{a:?} {b:?}");
        let (i, j) = concat_indices((&ia, &ja), (&ib, &jb));
        assert_eq!((i, j), (segment_index(&ab), reverse_index(&ab)), "{a:?} {b:?}");
    }
}

#[test]
fn fixes_segment_matches_index_of_first_edge() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..5000 {
        let mut p = random_pairs(&mut rng, 5, 8);
        if p.len() < 2 {
            p.push((1, 1));
        }
        let fixes = fixes_segment(&seq(&p)).unwrap();
        assert_eq!(fixes, oracle_index(&p) == p[0].0 as u128, "{p:?}");
    }
}

/// Every closed path at `base` of length `<= len` obeying the backtracking
/// rule, enumerated explicitly; unimodular ones contribute their index.
fn explicit_profile(g: &LabeledGraph, base: &str, len: usize) -> BTreeSet<u128> {
    let b = g.vertex_index(base).unwrap();
    let mut out = BTreeSet::from([1u128]);
    let mut path: Vec<HalfEdge> = Vec::new();
    fn walk(g: &LabeledGraph, b: usize, v: usize, len: usize, path: &mut Vec<HalfEdge>, out: &mut BTreeSet<u128>) {
        if !path.is_empty() && v == b {
            let pairs: Vec<(u64, u64)> =
                path.iter().map(|&h| (g.label(h).unsigned_abs(), g.label(h.reverse()).unsigned_abs())).collect();
            let num: BigUint = pairs.iter().map(|p| BigUint::from(p.0)).product();
            let den: BigUint = pairs.iter().map(|p| BigUint::from(p.1)).product();
            if num == den {
                out.insert(segment_index(&IndexSequence::new(pairs).unwrap()).to_u128().unwrap());
            }
        }
        if path.len() == len {
            return;
        }
        for &h in g.incident(v) {
            if let Some(&last) = path.last() {
                if h == last.reverse() && g.label(h).unsigned_abs() < 2 {
                    continue;
                }
            }
            path.push(h);
            walk(g, b, g.terminus(h), len, path, out);
            path.pop();
        }
    }
    walk(g, b, b, len, &mut path, &mut out);
    out
}

fn fixtures() -> Vec<(String, LabeledGraph)> {
    let mut v: Vec<(String, LabeledGraph)> = [
        Family::Bs { m: 2, n: 4 },
        Family::Bs { m: 2, n: 3 },
        Family::Bs { m: 3, n: -6 },
        Family::G1 { k: 2, n: 2 },
        Family::G2 { k: 2, n: 2 },
        Family::G3 { k: 3, n: 4, p: 2 },
    ]
    .into_iter()
    .map(|f| (format!("{f:?}"), make_example(f).unwrap().graph))
    .collect();
    for loops in [vec![(1, 2), (1, 1)], vec![(1, 4), (1, 1), (2, 2)], vec![(2, 3), (3, 2)], vec![(1, 6), (2, 2)]] {
        v.push((format!("wedge {loops:?}"), wedge(&loops).unwrap()));
    }
    v
}

#[test]
fn truncated_profile_matches_explicit_enumeration() {
    for (name, g) in fixtures() {
        for base in g.vertices().to_vec() {
            for len in 1..=6 {
                let dp = truncated_profile(&g, &base, len).unwrap();
                let want: Vec<u128> = explicit_profile(&g, &base, len).into_iter().collect();
                assert_eq!(dp.values(), want.as_slice(), "{name} at {base}, L = {len}");
            }
        }
    }
}

#[test]
fn frozen_truncated_profiles() {
    let g2 = make_example(Family::G2 { k: 2, n: 2 }).unwrap().graph;
    assert_eq!(truncated_profile(&g2, "v", 8).unwrap().values(), &[1, 2, 8, 32]);
    let bs23 = make_example(Family::Bs { m: 2, n: 3 }).unwrap().graph;
    assert_eq!(truncated_profile(&bs23, "v", 6).unwrap().values(), &[1, 2, 3, 4, 6, 8, 9, 12, 18, 27]);
    let w = wedge(&[(1, 6), (2, 2)]).unwrap();
    assert_eq!(truncated_profile(&w, "v", 5).unwrap().values(), &[1, 2, 12, 72]);
}

#[test]
fn one_is_always_present() {
    let g = make_example(Family::G1 { k: 3, n: 2 }).unwrap().graph;
    let p = truncated_profile(&g, "u", 1).unwrap();
    assert!(p.contains(1));
    assert!(BigUint::one() == segment_index(&seq(&[(1, 1)])));
}
