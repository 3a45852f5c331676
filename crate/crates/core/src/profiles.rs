//! Equivalence of depth profiles under truncated division.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_integer::Integer;
use serde_json::{json, Value};

use crate::depth::{SymbolicProfile, TruncatedProfile};
use crate::error::{GbsError, GbsResult};

pub const DEFAULT_WITNESS_BOUND: u128 = 10_000;

/// Ratios of successive elements over one period of the tail, stored in the
/// lexicographically least rotation. The entries are integers because the
/// profile is a divisibility chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatioCycle {
    cycle: Vec<u128>,
}

impl RatioCycle {
    pub fn new(ratios: Vec<u128>) -> RatioCycle {
        let n = ratios.len();
        let best = (0..n)
            .map(|s| ratios[s..].iter().chain(&ratios[..s]).copied().collect::<Vec<_>>())
            .min()
            .unwrap_or_default();
        RatioCycle { cycle: best }
    }

    pub fn entries(&self) -> &[u128] {
        &self.cycle
    }

    pub fn product(&self) -> u128 {
        self.cycle.iter().product()
    }

    /// Equality up to rotation.
    pub fn cyclically_equal(&self, other: &RatioCycle) -> bool {
        self.cycle == other.cycle
    }
}

impl fmt::Display for RatioCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.cycle.iter().map(u128::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The tail ratio cycle, read from the normal form: one period starting at
/// the first element above every non-periodic one.
pub fn tail_ratio_cycle(p: &SymbolicProfile) -> GbsResult<RatioCycle> {
    let c = p.canonical()?;
    let q = c.ratio();
    let start_above = c.head().iter().copied().max().unwrap_or(0);
    let x0 = c
        .tail_scales()
        .iter()
        .map(|&t| {
            let mut x = t;
            while x <= start_above {
                x *= q;
            }
            x
        })
        .min()
        .expect("tail scales are nonempty");
    let period: Vec<u128> = c.elements_up_to(x0 * q).into_iter().filter(|&x| x >= x0).collect();
    let ratios = period.windows(2).map(|w| w[1] / w[0]).collect();
    Ok(RatioCycle::new(ratios))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// `S1/r = S2/r_prime`.
    Equivalent { r: u128, r_prime: u128 },
    Inequivalent { reason: String, cycles: (RatioCycle, RatioCycle) },
    Unknown { reason: String },
}

/// Different tail cycles prove inequivalence, since rescaling preserves the
/// cycle. Otherwise searches `r, r' <= bound` for equal rescalings, returning
/// the witness least by `(max(r, r'), r, r')`.
pub fn compare_profiles(p1: &SymbolicProfile, p2: &SymbolicProfile, bound: u128) -> Comparison {
    let (c1, c2) = match (tail_ratio_cycle(p1), tail_ratio_cycle(p2)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Comparison::Unknown { reason: format!("cannot read tail cycles: {e}") },
    };
    if !c1.cyclically_equal(&c2) {
        return Comparison::Inequivalent {
            reason: format!("tail ratio cycles {c1} and {c2} differ, and rescaling preserves the tail cycle"),
            cycles: (c1, c2),
        };
    }
    let mut seen1: HashMap<SymbolicProfile, u128> = HashMap::new();
    let mut seen2: HashMap<SymbolicProfile, u128> = HashMap::new();
    for t in 1..=bound {
        let n1 = match p1.rescale(t).and_then(|p| p.canonical()) {
            Ok(p) => p,
            Err(e) => return Comparison::Unknown { reason: format!("rescaling by {t} failed: {e}") },
        };
        let n2 = match p2.rescale(t).and_then(|p| p.canonical()) {
            Ok(p) => p,
            Err(e) => return Comparison::Unknown { reason: format!("rescaling by {t} failed: {e}") },
        };
        seen1.entry(n1.clone()).or_insert(t);
        seen2.entry(n2.clone()).or_insert(t);
        let mut best: Option<(u128, u128)> = None;
        if let Some(&r) = seen1.get(&n2) {
            best = Some((r, t));
        }
        if let Some(&r2) = seen2.get(&n1) {
            if best.map_or(true, |b| (t, r2) < b) {
                best = Some((t, r2));
            }
        }
        if let Some((r, r_prime)) = best {
            return Comparison::Equivalent { r, r_prime };
        }
    }
    Comparison::Unknown {
        reason: format!("tail cycles agree ({c1}) but no witness r, r' <= {bound} was found"),
    }
}

/// Searches `r, r' <= bound` for `S1/r` and `S2/r'` that agree on
/// `[1, min(max(S1/r), max(S2/r'))]`. `None` does not prove inequivalence.
/// `S/r` depends only on `gcd(r, lcm S)`, so one `r` per class is tried.
pub fn equivalent_truncated(s1: &TruncatedProfile, s2: &TruncatedProfile, bound: u128) -> Option<(u128, u128)> {
    let reps1 = representatives(s1, bound);
    let reps2 = representatives(s2, bound);
    let mut best: Option<(u128, u128, u128)> = None;
    for (r, a) in &reps1 {
        for (r2, b) in &reps2 {
            let key = ((*r).max(*r2), *r, *r2);
            if best.map_or(false, |k| key >= k) {
                continue;
            }
            let top = a.max().min(b.max());
            let left: Vec<u128> = a.values().iter().copied().filter(|&x| x <= top).collect();
            let right: Vec<u128> = b.values().iter().copied().filter(|&x| x <= top).collect();
            if left == right {
                best = Some(key);
            }
        }
    }
    best.map(|(_, r, r2)| (r, r2))
}

fn representatives(s: &TruncatedProfile, bound: u128) -> Vec<(u128, TruncatedProfile)> {
    let lcm = s.values().iter().try_fold(1u128, |acc, &x| {
        let g = acc.gcd(&x);
        acc.checked_mul(x / g)
    });
    let mut classes: BTreeMap<u128, u128> = BTreeMap::new();
    let mut out = Vec::new();
    let mut sets: BTreeSet<Vec<u128>> = BTreeSet::new();
    for r in 1..=bound {
        if let Some(l) = lcm {
            let key = r.gcd(&l);
            if classes.contains_key(&key) {
                continue;
            }
            classes.insert(key, r);
        }
        let p = s.rescale(r).expect("r is positive");
        if sets.insert(p.values().to_vec()) {
            out.push((r, p));
        }
    }
    out
}

/// A profile read from a file: a JSON array of values (truncated) or an
/// object `{head, tailScales, ratio}` (symbolic).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyProfile {
    Truncated(TruncatedProfile),
    Symbolic(SymbolicProfile),
}

/// Integers above `u64::MAX` are written as decimal strings.
fn number(x: u128) -> Value {
    match u64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

fn numbers(xs: &[u128]) -> Value {
    Value::Array(xs.iter().map(|&x| number(x)).collect())
}

pub fn truncated_to_json(p: &TruncatedProfile) -> Value {
    numbers(p.values())
}

pub fn symbolic_to_json(p: &SymbolicProfile) -> Value {
    json!({ "head": numbers(p.head()), "tailScales": numbers(p.tail_scales()), "ratio": number(p.ratio()) })
}

pub fn profile_to_json(p: &AnyProfile) -> Value {
    match p {
        AnyProfile::Truncated(t) => truncated_to_json(t),
        AnyProfile::Symbolic(s) => symbolic_to_json(s),
    }
}

pub fn cycle_to_json(c: &RatioCycle) -> Value {
    numbers(c.entries())
}

pub fn comparison_to_json(c: &Comparison) -> Value {
    match c {
        Comparison::Equivalent { r, r_prime } => {
            json!({ "status": "Equivalent", "witness": { "r": number(*r), "rPrime": number(*r_prime) } })
        }
        Comparison::Inequivalent { reason, cycles } => json!({
            "status": "Inequivalent",
            "reason": reason,
            "cycles": [cycle_to_json(&cycles.0), cycle_to_json(&cycles.1)],
        }),
        Comparison::Unknown { reason } => json!({ "status": "Unknown", "reason": reason }),
    }
}

fn perr(at: &str, msg: &str) -> GbsError {
    GbsError::Parse { location: at.to_string(), message: msg.to_string() }
}

fn parse_number(v: &Value, at: &str) -> GbsResult<u128> {
    match v {
        Value::Number(n) => n.as_u64().map(u128::from).ok_or_else(|| perr(at, "expected a positive integer")),
        Value::String(s) => s.parse().map_err(|_| perr(at, "expected a decimal integer")),
        _ => Err(perr(at, "expected an integer")),
    }
}

fn parse_numbers(v: &Value, at: &str) -> GbsResult<Vec<u128>> {
    let arr = v.as_array().ok_or_else(|| perr(at, "expected an array"))?;
    arr.iter().enumerate().map(|(i, x)| parse_number(x, &format!("{at}[{i}]"))).collect()
}

pub fn parse_profile(text: &str) -> GbsResult<AnyProfile> {
    let v: Value = serde_json::from_str(text).map_err(|e| GbsError::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    match &v {
        Value::Array(_) => Ok(AnyProfile::Truncated(TruncatedProfile::new(parse_numbers(&v, "$")?, 0)?)),
        Value::Object(obj) => {
            for k in obj.keys() {
                if !["head", "tailScales", "ratio"].contains(&k.as_str()) {
                    return Err(perr(&format!("$.{k}"), "unknown key"));
                }
            }
            let head = match obj.get("head") {
                Some(h) => parse_numbers(h, "$.head")?,
                None => Vec::new(),
            };
            let tails = parse_numbers(obj.get("tailScales").ok_or_else(|| perr("$.tailScales", "missing"))?, "$.tailScales")?;
            let ratio = parse_number(obj.get("ratio").ok_or_else(|| perr("$.ratio", "missing"))?, "$.ratio")?;
            Ok(AnyProfile::Symbolic(SymbolicProfile::new(head, tails, ratio)?))
        }
        _ => Err(perr("$", "expected an array or an object")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depth::wedge_profile;

    fn sp(h: &[u128], t: &[u128], q: u128) -> SymbolicProfile {
        SymbolicProfile::new(h.to_vec(), t.to_vec(), q).unwrap()
    }

    fn tp(v: &[u128]) -> TruncatedProfile {
        TruncatedProfile::new(v.to_vec(), 8).unwrap()
    }

    #[test]
    fn cycles() {
        assert_eq!(tail_ratio_cycle(&sp(&[], &[1], 6)).unwrap().entries(), &[6]);
        assert_eq!(tail_ratio_cycle(&wedge_profile(36, &[1, 3]).unwrap()).unwrap().entries(), &[3, 12]);
        let g3 = wedge_profile(16, &[1, 4, 8]).unwrap();
        assert_eq!(tail_ratio_cycle(&g3).unwrap().entries(), &[2, 2, 4]);
        assert_eq!(tail_ratio_cycle(&g3).unwrap(), RatioCycle::new(vec![4, 2, 2]));
        assert_eq!(tail_ratio_cycle(&sp(&[1], &[2], 6)).unwrap().entries(), &[6]);
    }

    #[test]
    fn comparisons() {
        let c = compare_profiles(&sp(&[], &[1], 6), &wedge_profile(36, &[1, 3]).unwrap(), 100);
        assert!(matches!(c, Comparison::Inequivalent { .. }));
        let c = compare_profiles(&sp(&[], &[1], 2), &wedge_profile(4, &[1, 2]).unwrap(), 100);
        assert_eq!(c, Comparison::Equivalent { r: 1, r_prime: 1 });
        let two = sp(&[], &[1], 2);
        let c = compare_profiles(&two, &two.rescale(4).unwrap(), 100);
        assert!(matches!(c, Comparison::Equivalent { .. }));
        let c = compare_profiles(&sp(&[], &[1], 6), &sp(&[1], &[2], 6), 100);
        assert_eq!(c, Comparison::Equivalent { r: 1, r_prime: 2 });
    }

    #[test]
    fn truncated_witnesses() {
        assert_eq!(equivalent_truncated(&tp(&[1, 2, 4, 8]), &tp(&[1, 2, 4, 8]), 10), Some((1, 1)));
        let a = tp(&[1, 2, 4, 8]);
        assert!(equivalent_truncated(&a, &a.rescale(2).unwrap(), 10).is_some());
        assert_eq!(equivalent_truncated(&tp(&[1, 6, 36]), &tp(&[1, 36]), 10), Some((1, 6)));
        assert_eq!(equivalent_truncated(&tp(&[1, 6, 36]), &tp(&[1, 36]), 5), None);
    }

    #[test]
    fn profile_json_round_trip() {
        let s = AnyProfile::Symbolic(sp(&[1], &[2], 6));
        assert_eq!(parse_profile(&profile_to_json(&s).to_string()).unwrap(), s);
        let t = AnyProfile::Truncated(TruncatedProfile::new(vec![1, 4, 1 << 70], 0).unwrap());
        assert_eq!(parse_profile(&profile_to_json(&t).to_string()).unwrap(), t);
        assert!(parse_profile("{\"ratio\": 2}").is_err());
        assert!(parse_profile("[2, 4]").is_err());
    }
}
