use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::error::{GbsError, GbsResult};

/// Forward/backward indices `(n_i, m_i)` of the edges of a segment.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexSequence {
    pairs: Vec<(u64, u64)>,
}

impl IndexSequence {
    pub fn new(pairs: Vec<(u64, u64)>) -> GbsResult<IndexSequence> {
        if pairs.is_empty() {
            return Err(GbsError::Constraint("index sequence must be nonempty".into()));
        }
        if pairs.iter().any(|&(n, m)| n == 0 || m == 0) {
            return Err(GbsError::Constraint("index sequence entries must be positive".into()));
        }
        Ok(IndexSequence { pairs })
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The sequence of the reversed segment: order reversed, pairs swapped.
    pub fn reversed(&self) -> IndexSequence {
        IndexSequence { pairs: self.pairs.iter().rev().map(|&(n, m)| (m, n)).collect() }
    }

    pub fn concat(&self, other: &IndexSequence) -> IndexSequence {
        let mut pairs = self.pairs.clone();
        pairs.extend_from_slice(&other.pairs);
        IndexSequence { pairs }
    }
}

/// Smallest `r` with `N_l | r · M_{l-1}` for every prefix, computed as the lcm
/// of `N_l / gcd(N_l, M_{l-1})`.
pub fn segment_index(seq: &IndexSequence) -> BigUint {
    let mut big_n = BigUint::one();
    let mut big_m = BigUint::one();
    let mut r = BigUint::one();
    for &(n, m) in seq.pairs() {
        big_n *= n;
        let g = big_n.gcd(&big_m);
        r = r.lcm(&(&big_n / g));
        big_m *= m;
    }
    r
}

pub fn reverse_index(seq: &IndexSequence) -> BigUint {
    segment_index(&seq.reversed())
}

/// Index pair of a concatenation from the index pairs of its two halves.
pub fn concat_indices(first: (&BigUint, &BigUint), second: (&BigUint, &BigUint)) -> (BigUint, BigUint) {
    let (i1, j1) = first;
    let (i2, j2) = second;
    let g = j1.gcd(i2);
    ((i1 * i2) / &g, (j1 * j2) / &g)
}

/// Direct search for the least admissible `r`, scanning multiples of `n_1`.
/// Returns `None` if no `r <= limit` works or a product overflows `u128`.
pub fn segment_index_brute_force(seq: &IndexSequence, limit: u128) -> Option<u128> {
    let pairs = seq.pairs();
    let mut prefix_n = Vec::with_capacity(pairs.len());
    let mut prefix_m = Vec::with_capacity(pairs.len());
    let (mut big_n, mut big_m) = (1u128, 1u128);
    for &(n, m) in pairs {
        prefix_m.push(big_m);
        big_n = big_n.checked_mul(n as u128)?;
        prefix_n.push(big_n);
        big_m = big_m.checked_mul(m as u128)?;
    }
    let step = pairs[0].0 as u128;
    let mut r = step;
    while r <= limit {
        let ok = prefix_n
            .iter()
            .zip(&prefix_m)
            .all(|(&nl, &ml)| r.checked_mul(ml).map_or(false, |x| x % nl == 0));
        if ok {
            return Some(r);
        }
        r += step;
    }
    None
}

/// Whether the stabilizer of the first edge fixes the whole segment.
pub fn fixes_segment(seq: &IndexSequence) -> GbsResult<bool> {
    let pairs = seq.pairs();
    if pairs.len() < 2 {
        return Err(GbsError::Constraint("fixesSegment needs a sequence of length >= 2".into()));
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for l in 1..pairs.len() {
        num *= pairs[l].0;
        den *= pairs[l - 1].1;
        if !(&den % &num == BigUint::from(0u32)) {
            return Ok(false);
        }
    }
    Ok(true)
}
