use std::collections::BTreeSet;

use num_integer::Integer;

use crate::error::{GbsError, GbsResult};
use crate::graph_core::LabeledGraph;

/// The set `head ∪ { c·Q^i : c ∈ tails, i ≥ 0 }`, required to be a
/// divisibility chain when listed in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolicProfile {
    head: Vec<u128>,
    tails: Vec<u128>,
    ratio: u128,
}

fn mul(a: u128, b: u128) -> GbsResult<u128> {
    a.checked_mul(b).ok_or_else(|| GbsError::Overflow("symbolic profile element".into()))
}

fn perr(msg: String) -> GbsError {
    GbsError::Profile(msg)
}

impl SymbolicProfile {
    pub fn new(head: Vec<u128>, tails: Vec<u128>, ratio: u128) -> GbsResult<SymbolicProfile> {
        if ratio < 2 {
            return Err(perr(format!("ratio must be at least 2, got {ratio}")));
        }
        if tails.is_empty() {
            return Err(perr("at least one tail scale is required".into()));
        }
        if head.contains(&0) || tails.contains(&0) {
            return Err(perr("profile elements must be positive".into()));
        }
        let head: Vec<u128> = head.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let tails: Vec<u128> = tails.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let p = SymbolicProfile { head, tails, ratio };
        p.check_chain()?;
        Ok(p)
    }

    pub fn head(&self) -> &[u128] {
        &self.head
    }

    pub fn tail_scales(&self) -> &[u128] {
        &self.tails
    }

    pub fn ratio(&self) -> u128 {
        self.ratio
    }

    /// Largest head element or tail scale.
    fn base_max(&self) -> u128 {
        self.head.iter().chain(&self.tails).copied().max().unwrap_or(1)
    }

    pub fn contains(&self, x: u128) -> bool {
        if x == 0 {
            return false;
        }
        if self.head.binary_search(&x).is_ok() {
            return true;
        }
        self.tails.iter().any(|&c| {
            if x % c != 0 {
                return false;
            }
            let mut y = x / c;
            while y % self.ratio == 0 {
                y /= self.ratio;
            }
            y == 1
        })
    }

    /// Sorted elements `<= bound`.
    pub fn elements_up_to(&self, bound: u128) -> Vec<u128> {
        let mut out: BTreeSet<u128> = self.head.iter().copied().filter(|&h| h <= bound).collect();
        for &c in &self.tails {
            let mut x = c;
            while x <= bound {
                out.insert(x);
                match x.checked_mul(self.ratio) {
                    Some(y) => x = y,
                    None => break,
                }
            }
        }
        out.into_iter().collect()
    }

    /// The first `count` elements in increasing order.
    pub fn first_elements(&self, count: usize) -> Vec<u128> {
        let mut bound = self.base_max();
        loop {
            let els = self.elements_up_to(bound);
            if els.len() >= count {
                return els.into_iter().take(count).collect();
            }
            match bound.checked_mul(self.ratio) {
                Some(b) => bound = b,
                None => return els,
            }
        }
    }

    fn check_chain(&self) -> GbsResult<()> {
        let q = self.ratio;
        let bound = mul(mul(mul(self.base_max(), q)?, q)?, q)?;
        let els = self.elements_up_to(bound);
        for w in els.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(perr(format!("not a divisibility chain: {} does not divide {}", w[0], w[1])));
            }
        }
        Ok(())
    }

    /// Normal form: least ratio, tail scales minimal within their orbits and
    /// head reduced to the elements whose orbit leaves the set. Two profiles
    /// denote the same set exactly when their normal forms are equal.
    pub fn canonical(&self) -> GbsResult<SymbolicProfile> {
        let m = self.base_max();
        let big_q = self.ratio;
        let window = self.elements_up_to(mul(m, big_q)?);
        let q = integer_roots(big_q)
            .into_iter()
            .find(|&q| window.iter().filter(|&&x| x > m).all(|&x| x.checked_mul(q).map_or(false, |y| self.contains(y))))
            .unwrap_or(big_q);
        let periodic = |c: u128| -> bool {
            let mut x = c;
            loop {
                if !self.contains(x) {
                    return false;
                }
                if x > m {
                    return true;
                }
                match x.checked_mul(q) {
                    Some(y) => x = y,
                    None => return false,
                }
            }
        };
        let candidates = self.elements_up_to(mul(m, q)?);
        let mut head = Vec::new();
        let mut tails = Vec::new();
        for &c in &candidates {
            if periodic(c) {
                if !(c % q == 0 && periodic(c / q)) {
                    tails.push(c);
                }
            } else {
                head.push(c);
            }
        }
        SymbolicProfile::new(head, tails, q)
    }

    /// `S/r = { s / gcd(r, s) }`. Each tail family's gcd stabilizes after
    /// finitely many steps; earlier terms join the head.
    pub fn rescale(&self, r: u128) -> GbsResult<SymbolicProfile> {
        if r == 0 {
            return Err(GbsError::Constraint("rescaling factor must be positive".into()));
        }
        let q = self.ratio;
        let mut i0 = 0u32;
        for &c in &self.tails {
            let mut x = c;
            let mut i = 0u32;
            while r.gcd(&x) != r.gcd(&mul(x, q)?) {
                x = mul(x, q)?;
                i += 1;
            }
            i0 = i0.max(i);
        }
        let mut head: Vec<u128> = self.head.iter().map(|&h| h / r.gcd(&h)).collect();
        let mut tails = Vec::new();
        for &c in &self.tails {
            let mut x = c;
            for _ in 0..i0 {
                head.push(x / r.gcd(&x));
                x = mul(x, q)?;
            }
            tails.push(x / r.gcd(&x));
        }
        SymbolicProfile::new(head, tails, q)
    }
}

/// Integers `q >= 2` with `q^j = n` for some `j >= 1`, increasing.
fn integer_roots(n: u128) -> Vec<u128> {
    let mut out = BTreeSet::new();
    out.insert(n);
    let mut j = 2u32;
    while (1u128 << j.min(127)) <= n && j < 128 {
        let guess = (n as f64).powf(1.0 / j as f64).round() as u128;
        for q in guess.saturating_sub(1).max(2)..=guess + 1 {
            if q.checked_pow(j) == Some(n) {
                out.insert(q);
            }
        }
        j += 1;
    }
    out.into_iter().collect()
}

/// Closed form for `BS(1,N) ∨ BS(n_1,n_1) ∨ … ∨ BS(n_r,n_r)`: the set
/// `{ N^i·n_j }`.
pub fn wedge_profile(big_n: u128, divisors: &[u128]) -> GbsResult<SymbolicProfile> {
    if big_n < 2 {
        return Err(GbsError::Constraint(format!("N must be greater than 1, got {big_n}")));
    }
    if divisors.is_empty() {
        return Err(GbsError::Constraint("at least one divisor is required".into()));
    }
    for &d in divisors {
        if d == 0 || big_n % d != 0 {
            return Err(GbsError::Constraint(format!("{d} does not divide N = {big_n}")));
        }
    }
    if !divisors.contains(&1) {
        return Err(GbsError::Constraint("divisors must contain 1".into()));
    }
    let mut set: BTreeSet<u128> = divisors.iter().copied().collect();
    set.insert(big_n);
    for &a in &set {
        for &b in &set {
            let l = a.lcm(&b);
            if !set.contains(&l) {
                return Err(GbsError::Constraint(format!("divisors with N are not closed under lcm: lcm({a}, {b}) = {l}")));
            }
        }
    }
    SymbolicProfile::new(Vec::new(), divisors.to_vec(), big_n)
}

/// Reads off `(N, divisors)` from a one-vertex graph with one loop of labels
/// `{1, N}` (up to sign) and further loops with equal absolute labels.
pub fn wedge_parameters(g: &LabeledGraph) -> GbsResult<(u128, Vec<u128>)> {
    g.ensure_valid()?;
    if g.vertex_count() != 1 {
        return Err(GbsError::Constraint("wedge shape needs a single vertex".into()));
    }
    let mut big_n = None;
    let mut divisors = BTreeSet::new();
    for e in g.edges() {
        let (a, b) = (e.label_from.unsigned_abs() as u128, e.label_to.unsigned_abs() as u128);
        if a == b {
            divisors.insert(a);
        } else if a.min(b) == 1 {
            if big_n.replace(a.max(b)).is_some() {
                return Err(GbsError::Constraint("wedge shape needs exactly one loop with labels {1, N}, N > 1".into()));
            }
        } else {
            return Err(GbsError::Constraint(format!("loop `{}` has labels ({a}, {b}), neither equal nor 1 and N", e.id)));
        }
    }
    let big_n =
        big_n.ok_or_else(|| GbsError::Constraint("wedge shape needs a loop with labels {1, N}, N > 1".into()))?;
    if divisors.is_empty() {
        return Err(GbsError::Constraint("wedge shape needs at least one loop with equal labels".into()));
    }
    Ok((big_n, divisors.into_iter().collect()))
}

pub fn wedge_profile_of_graph(g: &LabeledGraph) -> GbsResult<SymbolicProfile> {
    let (n, d) = wedge_parameters(g)?;
    wedge_profile(n, &d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(h: &[u128], t: &[u128], q: u128) -> SymbolicProfile {
        SymbolicProfile::new(h.to_vec(), t.to_vec(), q).unwrap()
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(wedge_profile(4, &[1]).unwrap().first_elements(4), vec![1, 4, 16, 64]);
        let p = wedge_profile(36, &[1, 3]).unwrap();
        assert_eq!(p.first_elements(5), vec![1, 3, 36, 108, 1296]);
        assert!(matches!(wedge_profile(6, &[1, 2, 4]), Err(GbsError::Constraint(m)) if m.contains("4 does not divide")));
        assert!(wedge_profile(6, &[2]).is_err());
        assert!(wedge_profile(1, &[1]).is_err());
    }

    #[test]
    fn chain_is_enforced() {
        assert!(SymbolicProfile::new(vec![], vec![1, 2, 3], 6).is_err());
    }

    #[test]
    fn canonical_reduces_ratio() {
        let p = sp(&[], &[1, 2], 4).canonical().unwrap();
        assert_eq!(p, sp(&[], &[1], 2));
        let p = sp(&[1], &[3], 3).canonical().unwrap();
        assert_eq!(p, sp(&[], &[1], 3));
        let p = sp(&[], &[1, 3], 36).canonical().unwrap();
        assert_eq!(p, sp(&[], &[1, 3], 36));
    }

    #[test]
    fn rescale_examples() {
        let six = sp(&[], &[1], 6);
        let r = six.rescale(3).unwrap();
        assert_eq!(r, sp(&[1], &[2], 6));
        assert_eq!(r.canonical().unwrap(), sp(&[1], &[2], 6));
        assert_eq!(sp(&[], &[1], 2).rescale(2).unwrap().canonical().unwrap(), sp(&[], &[1], 2));
        assert_eq!(six.rescale(1).unwrap(), six);
    }

    #[test]
    fn roots() {
        assert_eq!(integer_roots(16), vec![2, 4, 16]);
        assert_eq!(integer_roots(36), vec![6, 36]);
        assert_eq!(integer_roots(7), vec![7]);
    }
}
