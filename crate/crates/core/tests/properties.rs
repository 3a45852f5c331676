use proptest::prelude::*;

use gbs_core::bass_serre::{segment_index, IndexSequence};
use gbs_core::covering::{covering_index, validate_covering, BranchedCovering};
use gbs_core::deform::{isomorphic, reduce, IsoMode};
use gbs_core::depth::{truncated_profile, wedge_profile, SymbolicProfile, TruncatedProfile};
use gbs_core::graph_core::{certify_non_elementary, orientation_character_trivial, parse_graph, serialize_graph, wedge};
use gbs_core::profiles::{compare_profiles, equivalent_truncated, tail_ratio_cycle, Comparison};
use gbs_core::LabeledGraph;

fn truncated() -> impl Strategy<Value = TruncatedProfile> {
    prop::collection::vec(1u128..=2000, 0..10).prop_map(|mut v| {
        v.push(1);
        TruncatedProfile::new(v, 0).unwrap()
    })
}

/// Wedge closed forms `wedgeProfile(d^e, divisors of d^e closed under lcm)`.
fn symbolic() -> impl Strategy<Value = SymbolicProfile> {
    (2u128..=6, 1u32..=2, prop::collection::vec(0u32..=2, 0..3)).prop_map(|(d, e, extra)| {
        let big_n = d.pow(e);
        let mut divisors = vec![1];
        divisors.extend(extra.into_iter().map(|x| d.pow(x.min(e))));
        // Powers of one base form a chain, so the set is lcm-closed.
        wedge_profile(big_n, &divisors).unwrap()
    })
}

fn label() -> impl Strategy<Value = i64> {
    prop_oneof![1i64..=6, -6i64..=-1]
}

fn small_wedge() -> impl Strategy<Value = LabeledGraph> {
    prop::collection::vec((label(), label()), 1..=3).prop_map(|loops| wedge(&loops).unwrap())
}

fn two_vertex() -> impl Strategy<Value = LabeledGraph> {
    (prop::collection::vec((label(), label()), 1..=3), prop::collection::vec((label(), label()), 0..=1)).prop_map(
        |(links, loops)| {
            let mut edges: Vec<(String, &str, &str, i64, i64)> = Vec::new();
            for (i, &(a, b)) in links.iter().enumerate() {
                edges.push((format!("e{i}"), "u", "v", a, b));
            }
            for (i, &(a, b)) in loops.iter().enumerate() {
                edges.push((format!("l{i}"), "v", "v", a, b));
            }
            let tuples: Vec<(&str, &str, &str, i64, i64)> =
                edges.iter().map(|(id, f, t, a, b)| (id.as_str(), *f, *t, *a, *b)).collect();
            LabeledGraph::from_tuples(&["u", "v"], &tuples).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rescaling_composes(s in truncated(), r in 1u128..=50, t in 1u128..=50) {
        prop_assert_eq!(s.rescale(r).unwrap().rescale(t).unwrap(), s.rescale(r * t).unwrap());
    }

    #[test]
    fn rescaled_truncated_profiles_are_equivalent(s in truncated(), r in 1u128..=20) {
        let w = equivalent_truncated(&s, &s.rescale(r).unwrap(), 20);
        prop_assert!(w.is_some());
        let (a, b) = w.unwrap();
        let (x, y) = (s.rescale(a).unwrap(), s.rescale(r).unwrap().rescale(b).unwrap());
        let top = x.max().min(y.max());
        let cut = |p: &TruncatedProfile| p.values().iter().copied().filter(|&v| v <= top).collect::<Vec<_>>();
        prop_assert_eq!(cut(&x), cut(&y));
    }

    #[test]
    fn tail_cycle_survives_rescaling(p in symbolic(), r in 1u128..=100) {
        let c = tail_ratio_cycle(&p).unwrap();
        prop_assert!(c.cyclically_equal(&tail_ratio_cycle(&p.rescale(r).unwrap()).unwrap()));
    }

    #[test]
    fn symbolic_rescaling_matches_elementwise(p in symbolic(), r in 1u128..=30) {
        let q = p.rescale(r).unwrap();
        let bound = 1_000_000;
        let mut want: Vec<u128> = p.elements_up_to(bound * r).into_iter().map(|x| x / num_integer::gcd(x, r)).filter(|&x| x <= bound).collect();
        want.sort_unstable();
        want.dedup();
        prop_assert_eq!(q.elements_up_to(bound), want);
    }

    #[test]
    fn comparison_is_symmetric_and_sound(p in symbolic(), q in symbolic()) {
        let (a, b) = (compare_profiles(&p, &q, 200), compare_profiles(&q, &p, 200));
        match (&a, &b) {
            (Comparison::Equivalent { r, r_prime }, Comparison::Equivalent { .. }) => {
                let x = p.rescale(*r).unwrap().canonical().unwrap();
                let y = q.rescale(*r_prime).unwrap().canonical().unwrap();
                prop_assert_eq!(x, y);
            }
            (Comparison::Inequivalent { .. }, Comparison::Inequivalent { .. }) => {}
            (Comparison::Unknown { .. }, Comparison::Unknown { .. }) => {}
            _ => prop_assert!(false, "asymmetric: {:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn a_profile_is_equivalent_to_its_rescalings(p in symbolic(), r in 1u128..=12) {
        let c = compare_profiles(&p, &p.rescale(r).unwrap(), 50);
        prop_assert!(matches!(c, Comparison::Equivalent { .. }), "{:?}", c);
    }

    #[test]
    fn truncated_profiles_grow_with_length(g in small_wedge(), len in 1usize..=5) {
        prop_assume!(certify_non_elementary(&g).unwrap().certified);
        let short = truncated_profile(&g, "v", len).unwrap();
        let long = truncated_profile(&g, "v", len + 1).unwrap();
        prop_assert!(short.values().iter().all(|&x| long.contains(x)));
    }

    #[test]
    fn index_lies_between_first_label_and_forward_product(p in prop::collection::vec((1u64..=9, 1u64..=9), 1..=5)) {
        let s = IndexSequence::new(p.clone()).unwrap();
        let i = segment_index(&s);
        let product: num_bigint::BigUint = p.iter().map(|&(n, _)| num_bigint::BigUint::from(n)).product();
        prop_assert!((&product % &i).bits() == 0);
        prop_assert!((&i % p[0].0).bits() == 0);
    }

    #[test]
    fn graph_json_round_trips(g in two_vertex()) {
        let back = parse_graph(&serialize_graph(&g)).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn sign_changes_keep_the_graph_up_to_sign(g in two_vertex()) {
        let h = g.vertex_sign_change("u").unwrap().edge_sign_change("e0").unwrap();
        prop_assert!(isomorphic(&g, &h, IsoMode::UpToSignChange).unwrap().is_some());
        prop_assert_eq!(orientation_character_trivial(&g).unwrap(), orientation_character_trivial(&h).unwrap());
    }

    #[test]
    fn reduction_keeps_rank_and_orientation(g in two_vertex()) {
        let r = reduce(&g).unwrap();
        prop_assert_eq!(r.rank(), g.rank());
        prop_assert_eq!(orientation_character_trivial(&r).unwrap(), orientation_character_trivial(&g).unwrap());
        prop_assert!(r.vertex_count() <= g.vertex_count());
    }

    #[test]
    fn identity_covering_is_admissible(g in two_vertex()) {
        let c = BranchedCovering::identity(&g);
        prop_assert!(validate_covering(&c).unwrap().is_valid());
        prop_assert_eq!(covering_index(&c).unwrap(), 1);
    }
}
