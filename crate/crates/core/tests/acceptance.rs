//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the lines show up in plain `cargo test` output.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gbs_core::bass_serre::{build_ball, build_metric_ball, segment_index, IndexSequence};
use gbs_core::cayley::{build_delta, delta_balls_isomorphic};
use gbs_core::covering::{covering_index, validate_covering};
use gbs_core::deform::{apply_script, easycase_script, h2_script, isomorphic, IsoMode};
use gbs_core::depth::{truncated_profile, wedge_profile, SymbolicProfile, TruncatedProfile};
use gbs_core::graph_core::{bs_vertex_cover, make_example, wedge, Family};
use gbs_core::lattice::{check_lattice_prop, find_directed_structure, is_discrete, LatticeParams};
use gbs_core::profiles::{compare_profiles, tail_ratio_cycle, Comparison, RatioCycle, DEFAULT_WITNESS_BOUND};
use gbs_core::repro::repro_mainthm;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Least `r >= 1` with `N_l | r * M_{l-1}` for every prefix, by direct scan.
fn oracle_index(pairs: &[(u64, u64)]) -> u64 {
    let mut prefix = Vec::with_capacity(pairs.len());
    let (mut big_n, mut big_m) = (1u64, 1u64);
    for &(n, m) in pairs {
        big_n *= n;
        prefix.push((big_n, big_m));
        big_m *= m;
    }
    let mut r = 1;
    loop {
        if prefix.iter().all(|&(nl, ml)| (r * ml) % nl == 0) {
            return r;
        }
        r += 1;
    }
}

fn lib_index(pairs: &[(u64, u64)]) -> u64 {
    segment_index(&IndexSequence::new(pairs.to_vec()).unwrap()).to_u64().unwrap()
}

fn criterion_1() -> Outcome {
    let mut checked = 0u64;
    let mut pairs = Vec::new();
    fn exhaust(pairs: &mut Vec<(u64, u64)>, len: usize, checked: &mut u64) -> Result<(), String> {
        if pairs.len() == len {
            *checked += 1;
            let (a, b) = (lib_index(pairs), oracle_index(pairs));
            return ensure(a == b, format!("{pairs:?}: closed form {a}, oracle {b}"));
        }
        for n in 1..=10 {
            for m in 1..=10 {
                pairs.push((n, m));
                exhaust(pairs, len, checked)?;
                pairs.pop();
            }
        }
        Ok(())
    }
    for len in 1..=3 {
        exhaust(&mut pairs, len, &mut checked)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1_000_000 {
        let len = rng.gen_range(4..=5);
        let pairs: Vec<(u64, u64)> = (0..len).map(|_| (rng.gen_range(1..=10), rng.gen_range(1..=10))).collect();
        let (a, b) = (lib_index(&pairs), oracle_index(&pairs));
        ensure(a == b, format!("{pairs:?}: closed form {a}, oracle {b}"))?;
        checked += 1;
    }
    Ok(format!("{checked} sequences agree (all of length <= 3, 10^6 sampled of length 4-5)"))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10_000 {
        let (n1, m1, n2, m2) =
            (rng.gen_range(1..=1000u64), rng.gen_range(1..=1000u64), rng.gen_range(1..=1000u64), rng.gen_range(1..=1000u64));
        let want = n1 * n2 / num_integer::gcd(m1, n2);
        let got = lib_index(&[(n1, m1), (n2, m2)]);
        ensure(got == want, format!("[({n1},{m1}),({n2},{m2})]: {got} != {want}"))?;
    }
    Ok("10^4 length-2 sequences match n1*n2/gcd(m1,n2)".into())
}

/// Closed-form values up to the wedge horizon `N^floor((L-1)/2)`.
fn horizon_check(loops: &[(i64, i64)], closed: &SymbolicProfile, big_n: u128, len: usize) -> Result<Vec<u128>, String> {
    let g = wedge(loops).map_err(|e| e.to_string())?;
    let got = truncated_profile(&g, "v", len).map_err(|e| e.to_string())?;
    let horizon = big_n.pow(((len - 1) / 2) as u32);
    let want = closed.elements_up_to(horizon);
    ensure(got.values() == want.as_slice(), format!("{loops:?}: truncated {:?}, closed form {want:?}", got.values()))?;
    Ok(want)
}

fn criterion_3() -> Outcome {
    let a = horizon_check(&[(1, 2), (1, 1)], &wedge_profile(2, &[1]).unwrap(), 2, 8)?;
    let cover = make_example(Family::H2Cover { k: 2, n: 2 }).unwrap().covering.unwrap();
    let h2 = apply_script(&cover.source, &h2_script(2, 2)).map_err(|e| e.to_string())?;
    let expected = wedge(&[(1, 4), (1, 1), (1, 1), (1, 1)]).unwrap();
    ensure(isomorphic(&h2, &expected, IsoMode::Exact).unwrap().is_some(), "H2(2,2) does not reduce to the wedge")?;
    let b = horizon_check(&[(1, 4), (1, 1), (1, 1), (1, 1)], &wedge_profile(4, &[1]).unwrap(), 4, 8)?;
    Ok(format!("L = 8: {a:?} and {b:?}"))
}

fn criterion_4() -> Outcome {
    let bs = make_example(Family::Bs { m: 2, n: 4 }).unwrap().graph;
    let g1 = make_example(Family::G1 { k: 2, n: 2 }).unwrap().graph;
    let p = truncated_profile(&bs, "v", 8).map_err(|e| e.to_string())?;
    for v in ["u", "v"] {
        let q = truncated_profile(&g1, v, 8).map_err(|e| e.to_string())?;
        ensure(p == q, format!("BS(2,4) {:?} vs G1(2,2) at {v} {:?}", p.values(), q.values()))?;
    }
    Ok(format!("both give {:?}", p.values()))
}

fn criterion_5() -> Outcome {
    let r = repro_mainthm(4, 6).map_err(|e| e.to_string())?;
    ensure(r.passed(), serde_json::to_string(&r.to_json()).unwrap())?;
    let h2 = wedge_profile(36, &[1, 3]).unwrap();
    ensure(h2.first_elements(4) == [1, 3, 36, 108], "H2 profile is not {36^i} u {3*36^i}")?;
    match r.comparison {
        Some(Comparison::Inequivalent { cycles: (a, b), .. }) => {
            ensure(a == RatioCycle::new(vec![6]) && b == RatioCycle::new(vec![3, 12]), format!("cycles {a} vs {b}"))?;
            Ok(format!("Inequivalent with cycles {a} vs {b}"))
        }
        other => Err(format!("expected Inequivalent, got {other:?}")),
    }
}

fn criterion_6() -> Outcome {
    let p1 = wedge_profile(2, &[1]).unwrap();
    let p2 = SymbolicProfile::new(vec![], vec![1, 2], 4).unwrap();
    match compare_profiles(&p1, &p2, DEFAULT_WITNESS_BOUND) {
        Comparison::Equivalent { r: 1, r_prime: 1 } => Ok("Equivalent(1,1)".into()),
        other => Err(format!("got {other:?}")),
    }
}

fn criterion_7() -> Outcome {
    let g3 = wedge_profile(16, &[1, 4, 8]).unwrap();
    let g1 = wedge_profile(4, &[1]).unwrap();
    let c3 = tail_ratio_cycle(&g3).unwrap();
    ensure(c3.cyclically_equal(&RatioCycle::new(vec![4, 2, 2])), format!("G3 cycle {c3}"))?;
    let a = compare_profiles(&g3, &g1, DEFAULT_WITNESS_BOUND);
    ensure(matches!(a, Comparison::Inequivalent { .. }), format!("G3: {a:?}"))?;
    let g4 = wedge_profile(4, &[1]).unwrap();
    let g1b = wedge_profile(2, &[1]).unwrap();
    let b = compare_profiles(&g4, &g1b, DEFAULT_WITNESS_BOUND);
    ensure(matches!(b, Comparison::Inequivalent { .. }), format!("G4: {b:?}"))?;
    Ok(format!("G3 (5,4,2) cycle {c3} vs (4) and G4 (5,2) (4) vs (2) are Inequivalent"))
}

fn lattice_ok(f: Family, k: i64, n: i64) -> Result<(), String> {
    let g = make_example(f).unwrap().graph;
    let p = LatticeParams::new(k as u64, (k * n) as u64).unwrap();
    let d = find_directed_structure(&g, p).unwrap().ok_or(format!("{f:?}: no directed structure"))?;
    let r = check_lattice_prop(&g, &d, p).unwrap();
    ensure(r.holds(), format!("{f:?}: {:?}", r.violations))
}

fn criterion_8() -> Outcome {
    let mut count = 0;
    for k in 2..=5 {
        for n in 2..=5 {
            lattice_ok(Family::G1 { k, n }, k, n)?;
            lattice_ok(Family::G2 { k, n }, k, n)?;
            count += 2;
        }
    }
    for k in 2..=6 {
        for n in 2..=6 {
            for p in 2..k {
                if n % p == 0 && p != n {
                    lattice_ok(Family::G3 { k, n, p }, k, n)?;
                    count += 1;
                }
            }
        }
    }
    for k in 2..=7 {
        for n in 2..k {
            if k % n == 1 {
                lattice_ok(Family::G4 { k, n }, k, n)?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} graphs certified"))
}

fn criterion_9() -> Outcome {
    for m in 1..=50u64 {
        for n in 1..=50u64 {
            let d = is_discrete(m, n).map_err(|e| e.to_string())?;
            ensure(d == (num_integer::gcd(m, n) == 1), format!("({m},{n}): {d}"))?;
        }
    }
    Ok("2500 pairs agree with gcd(m,n) = 1".into())
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..1000 {
        let size = rng.gen_range(1..=12);
        let mut values: Vec<u128> = (0..size).map(|_| rng.gen_range(1..=5000)).collect();
        values.push(1);
        let s = TruncatedProfile::new(values, 0).unwrap();
        let (r, t) = (rng.gen_range(1..=50u128), rng.gen_range(1..=50u128));
        let lhs = s.rescale(r).unwrap().rescale(t).unwrap();
        let rhs = s.rescale(r * t).unwrap();
        ensure(lhs == rhs, format!("{:?} with r = {r}, s = {t}", s.values()))?;
    }
    let fixtures = [
        wedge_profile(2, &[1]).unwrap(),
        wedge_profile(4, &[1]).unwrap(),
        wedge_profile(6, &[1]).unwrap(),
        wedge_profile(36, &[1, 3]).unwrap(),
        wedge_profile(16, &[1, 4, 8]).unwrap(),
        wedge_profile(25, &[1, 5]).unwrap(),
        SymbolicProfile::new(vec![], vec![1, 2], 4).unwrap(),
        SymbolicProfile::new(vec![1, 3], vec![6], 6).unwrap(),
    ];
    for f in &fixtures {
        let c = tail_ratio_cycle(f).unwrap();
        for r in 1..=100 {
            let cr = tail_ratio_cycle(&f.rescale(r).unwrap()).unwrap();
            ensure(c.cyclically_equal(&cr), format!("{f:?} rescaled by {r}: {c} vs {cr}"))?;
        }
    }
    Ok(format!("10^3 truncated rescalings compose; {} fixture cycles invariant for r <= 100", fixtures.len()))
}

fn criterion_11() -> Outcome {
    let cover = make_example(Family::H2Cover { k: 2, n: 2 }).unwrap().covering.unwrap();
    let end = apply_script(&cover.source, &easycase_script()).map_err(|e| e.to_string())?;
    let bs = bs_vertex_cover(4, 16, 4).unwrap();
    ensure(validate_covering(&bs).unwrap().is_valid() && covering_index(&bs).unwrap() == 4, "BS(4,16) cover is not 4:1")?;
    ensure(isomorphic(&end, &bs.source, IsoMode::Exact).unwrap().is_some(), "script result is not the BS(4,16) cover")?;
    Ok(format!("{} moves reach the 4:1 cover of the BS(4,16) loop", easycase_script().len()))
}

fn criterion_12() -> Outcome {
    for f in [Family::Bs { m: 2, n: 4 }, Family::G1 { k: 2, n: 2 }, Family::G2 { k: 2, n: 2 }] {
        let ex = make_example(f).unwrap();
        let base = ex.graph.vertices()[0].clone();
        let ball = build_ball(&ex.graph, ex.plus.as_ref().unwrap(), &base, 3, 3).map_err(|e| e.to_string())?;
        let bad = ball.check_invariants();
        ensure(bad.is_empty(), format!("{f:?} R = 3 ball: {bad:?}"))?;
    }
    let mut deltas = Vec::new();
    for f in [Family::G1 { k: 2, n: 2 }, Family::G2 { k: 2, n: 2 }] {
        let ex = make_example(f).unwrap();
        let ball = build_metric_ball(&ex.graph, ex.plus.as_ref().unwrap(), "v", 10).map_err(|e| e.to_string())?;
        let d = build_delta(&ball, "v").map_err(|e| e.to_string())?;
        let degrees = d.interior_degrees();
        ensure(degrees.len() == 1, format!("{f:?}: interior degrees {degrees:?}"))?;
        deltas.push(d);
    }
    let iso = delta_balls_isomorphic(&deltas[0], &deltas[1], 2).map_err(|e| e.to_string())?;
    ensure(iso, "radius-2 balls of Δ differ")?;
    Ok(format!(
        "R = 3 balls valid; interior degree {:?}; radius-2 Δ balls isomorphic",
        deltas[0].interior_degrees()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, u64); 12] = [
        ("segment index equals the brute-force oracle", criterion_1, 300),
        ("length-2 closed formula", criterion_2, 5),
        ("wedge truncated profiles match the closed form", criterion_3, 30),
        ("BS(2,4) and G1(2,2) truncated profiles agree", criterion_4, 30),
        ("G1 vs H2 for (k,n) = (4,6)", criterion_5, 10),
        ("coprime case gives equal profiles", criterion_6, 1),
        ("G3 and G4 profiles are inequivalent to G1", criterion_7, 2),
        ("lattice certification of G1-G4", criterion_8, 30),
        ("discreteness iff gcd(m,n) = 1", criterion_9, 1),
        ("rescaling algebra", criterion_10, 10),
        ("easycase move script replay", criterion_11, 1),
        ("ball invariants and Δ balls", criterion_12, 60),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match result {
            Ok(msg) if elapsed > Duration::from_secs(*limit) => Err(format!("{msg}, but took longer than {limit} s")),
            r => r,
        };
        match result {
            Ok(msg) => println!("criterion {:>2} PASS ({:.2?}) {name}: {msg}", i + 1, elapsed),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL ({:.2?}) {name}: {msg}", i + 1, elapsed);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
