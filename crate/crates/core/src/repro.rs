//! End-to-end pipelines for the incommensurability results: covering checks,
//! move scripts to wedge form, closed-form profiles and their comparison.

use serde_json::{json, Value};

use crate::covering::{covering_index, validate_covering};
use crate::deform::{apply_script, easycase_script, g3_script, g4_script, h2_script, isomorphic, IsoMode};
use crate::depth::{wedge_profile, wedge_profile_of_graph, SymbolicProfile};
use crate::error::{GbsError, GbsResult};
use crate::graph_core::{bs_vertex_cover, make_example, serialize_graph, wedge, Family, LabeledGraph};
use crate::lattice::{check_lattice_prop, find_directed_structure, LatticeParams};
use crate::profiles::{compare_profiles, comparison_to_json, symbolic_to_json, Comparison, DEFAULT_WITNESS_BOUND};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReproStep {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReproReport {
    pub pipeline: String,
    pub steps: Vec<ReproStep>,
    pub comparison: Option<Comparison>,
    pub final_graph: Option<LabeledGraph>,
}

impl ReproReport {
    fn new(pipeline: String) -> ReproReport {
        ReproReport { pipeline, steps: Vec::new(), comparison: None, final_graph: None }
    }

    fn step(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> bool {
        self.steps.push(ReproStep { name: name.to_string(), passed, detail: detail.into() });
        passed
    }

    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.passed)
    }

    pub fn to_json(&self) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| json!({ "step": s.name, "passed": s.passed, "detail": s.detail }))
            .collect();
        let mut v = json!({ "pipeline": self.pipeline, "passed": self.passed(), "steps": steps });
        if let Some(c) = &self.comparison {
            v["comparison"] = comparison_to_json(c);
        }
        if let Some(g) = &self.final_graph {
            v["finalGraph"] = serde_json::from_str(&serialize_graph(g)).expect("serialized graph is JSON");
        }
        v
    }
}

fn lattice_step(report: &mut ReproReport, label: &str, family: Family, p: LatticeParams) -> GbsResult<bool> {
    let g = make_example(family)?.graph;
    let name = format!("{label} is a lattice in Aut(X_{{{},{}}})", p.m, p.n);
    match find_directed_structure(&g, p)? {
        Some(dir) => {
            let r = check_lattice_prop(&g, &dir, p)?;
            let detail = if r.holds() {
                format!("plus half-edges {:?}", dir.plus_half_edges().iter().map(|&h| g.half_edge_name(h)).collect::<Vec<_>>())
            } else {
                format!("{} violations", r.violations.len())
            };
            Ok(report.step(&name, r.holds(), detail))
        }
        None => Ok(report.step(&name, false, "no directed structure satisfies the conditions")),
    }
}

fn profile_step(report: &mut ReproReport, label: &str, got: &SymbolicProfile, want: &SymbolicProfile) -> GbsResult<bool> {
    let ok = got.canonical()? == want.canonical()?;
    let detail = format!("{} = first terms {:?}", symbolic_to_json(got), got.first_elements(6));
    Ok(report.step(label, ok, detail))
}

fn compare_step(report: &mut ReproReport, p1: &SymbolicProfile, p2: &SymbolicProfile, expect_equivalent: bool) {
    let c = compare_profiles(p1, p2, DEFAULT_WITNESS_BOUND);
    let ok = match &c {
        Comparison::Equivalent { .. } => expect_equivalent,
        Comparison::Inequivalent { .. } => !expect_equivalent,
        Comparison::Unknown { .. } => false,
    };
    let want = if expect_equivalent { "Equivalent" } else { "Inequivalent" };
    report.step("compare depth profiles", ok, format!("expected {want}, got {}", comparison_to_json(&c)));
    report.comparison = Some(c);
}

/// `G1` against `G2` in `Aut(X_{k,kn})` through the cover `H2 -> G2`. The
/// profiles are inequivalent exactly when `gcd(k,n) > 1`.
pub fn repro_mainthm(k: i64, n: i64) -> GbsResult<ReproReport> {
    let mut report = ReproReport::new(format!("mainthm k={k} n={n}"));
    let b = num_integer::gcd(k, n);
    let (a, c) = (k / b, n / b);
    let p = LatticeParams::new(k as u64, (k * n) as u64)?;
    lattice_step(&mut report, "G1", Family::G1 { k, n }, p)?;
    lattice_step(&mut report, "G2", Family::G2 { k, n }, p)?;
    let cover = make_example(Family::H2Cover { k, n })?.covering.expect("H2 comes with its covering");
    let v = validate_covering(&cover)?;
    report.step("H2 covering is admissible", v.is_valid(), format!("{} violations", v.violations.len()));
    let index = covering_index(&cover);
    let ok = matches!(index, Ok(i) if i == k as u64);
    report.step(
        "covering index",
        ok,
        match index {
            Ok(i) => format!("index {i} at every fiber (expected {k})"),
            Err(e) => e.to_string(),
        },
    );
    let script = h2_script(k, n);
    let wedge_graph = apply_script(&cover.source, &script)?;
    let mut loops = vec![(1, n * n)];
    loops.extend(std::iter::repeat((1, 1)).take((k - 1) as usize));
    loops.extend(std::iter::repeat((c, c)).take((b * (k - 1)) as usize));
    let expected = wedge(&loops)?;
    let iso = isomorphic(&wedge_graph, &expected, IsoMode::Exact)?.is_some();
    report.step(
        "move script reaches the wedge",
        iso,
        format!("{} moves; BS(1,{}) with {} BS(1,1) and {} BS({c},{c}) loops (a = {a})", script.len(), n * n, k - 1, b * (k - 1)),
    );
    report.final_graph = Some(wedge_graph.clone());
    let d2 = wedge_profile_of_graph(&wedge_graph)?;
    let divisors: Vec<u128> = if c == 1 { vec![1] } else { vec![1, c as u128] };
    profile_step(&mut report, "closed-form profile of H2", &d2, &wedge_profile((n * n) as u128, &divisors)?)?;
    let g1 = make_example(Family::G1PrimeWedge { k, n })?.graph;
    let d1 = wedge_profile_of_graph(&g1)?;
    profile_step(&mut report, "closed-form profile of G1", &d1, &wedge_profile(n as u128, &[1])?)?;
    compare_step(&mut report, &d1, &d2, b == 1);
    Ok(report)
}

/// The `k = n = 2` case drawn step by step: the 2:1 cover of `G2(2,2)` turns
/// into the 4:1 cover of the `BS(4,16)` loop.
pub fn repro_easycase() -> GbsResult<ReproReport> {
    let mut report = ReproReport::new("easycase".into());
    let cover = make_example(Family::H2Cover { k: 2, n: 2 })?.covering.expect("H2 comes with its covering");
    let v = validate_covering(&cover)?;
    report.step("2:1 cover of G2(2,2) is admissible", v.is_valid(), format!("{} violations", v.violations.len()));
    let idx = covering_index(&cover)?;
    report.step("its index", idx == 2, format!("index {idx}"));
    let bs = bs_vertex_cover(4, 16, 4)?;
    let vb = validate_covering(&bs)?;
    let ib = covering_index(&bs)?;
    report.step("4:1 cover of BS(4,16) is admissible", vb.is_valid() && ib == 4, format!("index {ib}"));
    let script = easycase_script();
    let end = apply_script(&cover.source, &script)?;
    let iso = isomorphic(&end, &bs.source, IsoMode::Exact)?;
    report.step("collapses and slides reach the BS(4,16) cover", iso.is_some(), format!("{} moves", script.len()));
    report.final_graph = Some(end);
    let d1 = wedge_profile_of_graph(&make_example(Family::G1PrimeWedge { k: 2, n: 2 })?.graph)?;
    let d2 = wedge_profile_of_graph(&apply_script(&cover.source, &h2_script(2, 2))?)?;
    profile_step(&mut report, "profile of G1", &d1, &wedge_profile(2, &[1])?)?;
    profile_step(&mut report, "profile of G2", &d2, &wedge_profile(4, &[1])?)?;
    compare_step(&mut report, &d1, &d2, false);
    Ok(report)
}

pub fn repro_g3(k: i64, n: i64, p: i64) -> GbsResult<ReproReport> {
    let mut report = ReproReport::new(format!("g3 k={k} n={n} p={p}"));
    if num_integer::gcd(k, n) != 1 {
        return Err(GbsError::Constraint("the G3 comparison assumes gcd(k,n) = 1".into()));
    }
    let params = LatticeParams::new(k as u64, (k * n) as u64)?;
    lattice_step(&mut report, "G3", Family::G3 { k, n, p }, params)?;
    let g = make_example(Family::G3 { k, n, p })?.graph;
    let end = apply_script(&g, &g3_script(k))?;
    let d3 = wedge_profile_of_graph(&end)?;
    report.final_graph = Some(end);
    let mut divisors = vec![1u128, (p * n) as u128];
    if p < k - 1 {
        divisors.push(n as u128);
    }
    profile_step(&mut report, "closed-form profile of G3", &d3, &wedge_profile((n * n) as u128, &divisors)?)?;
    let d1 = wedge_profile(n as u128, &[1])?;
    compare_step(&mut report, &d3, &d1, false);
    Ok(report)
}

pub fn repro_g4(k: i64, n: i64) -> GbsResult<ReproReport> {
    let mut report = ReproReport::new(format!("g4 k={k} n={n}"));
    let params = LatticeParams::new(k as u64, (k * n) as u64)?;
    lattice_step(&mut report, "G4", Family::G4 { k, n }, params)?;
    let g = make_example(Family::G4 { k, n })?.graph;
    let end = apply_script(&g, &g4_script(k, n))?;
    let d4 = wedge_profile_of_graph(&end)?;
    report.final_graph = Some(end);
    profile_step(&mut report, "closed-form profile of G4", &d4, &wedge_profile((n * n) as u128, &[1])?)?;
    let d1 = wedge_profile(n as u128, &[1])?;
    compare_step(&mut report, &d4, &d1, false);
    Ok(report)
}
