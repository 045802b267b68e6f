//! The weighted shift on `c_0` that is reiteratively but not
//! `𝔘`-frequently hypercyclic, made executable.
//!
//! `S = ∪_{j,l >= 1} ]l·10^j - j, l·10^j + j[`. The weights are
//! `w_k = 2` on `S`, `w_k = 2^{-c(k-1)}` on `(S+1) \ S` and `1` elsewhere,
//! where `c(n)` is the length of the run of `S` ending at `n`. Hence
//! `w_1···w_n = 2^{c(n)}`.

mod blocks;
mod dj;
mod fact1;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::index_sets::{IndexSet, SetKind, SetSpec};

pub use blocks::{
    banach_lower_bound_check, banach_window_count, build_block_family, phi, verify_conditions,
    Block, BlockFamily, BanachCheck, ConditionReport,
};
pub use dj::{
    dj_bound, dj_density_scan, dj_density_scans, e_contains, e_contains_u64, DSet, DjRow, DjScan, ESet,
};
pub use fact1::{fact1_candidates, verify_fact1, Fact1Report, Fact1Violation};

/// Decimal digit count; `0` has one digit.
pub(crate) fn digits_u128(m: u128) -> u32 {
    if m == 0 {
        1
    } else {
        m.ilog10() + 1
    }
}

/// Membership in `S` for machine-sized indices.
pub fn s_contains_u64(m: u64) -> bool {
    let m = u128::from(m);
    let mut p = 1u128;
    for j in 1..=u128::from(digits_u128(m)) {
        p *= 10;
        let (q, r) = (m / p, m % p);
        if (r < j && q >= 1) || r + j > p {
            return true;
        }
    }
    false
}

/// Membership in `S`: for each `j` up to the digit count of `m`, `m` lies
/// within distance `j - 1` of a positive multiple of `10^j`.
pub fn s_contains(m: &BigUint) -> bool {
    !s_witnesses_limited(m, true).is_empty()
}

/// All `(j, l)` with `m ∈ ]l·10^j - j, l·10^j + j[`.
pub fn s_witnesses(m: &BigUint) -> Vec<(u64, BigUint)> {
    s_witnesses_limited(m, false)
}

fn s_witnesses_limited(m: &BigUint, first_only: bool) -> Vec<(u64, BigUint)> {
    let mut out = Vec::new();
    if m.is_zero() {
        return out;
    }
    let digits = m.to_str_radix(10).len() as u64;
    let mut p = BigUint::one();
    for j in 1..=digits {
        p *= 10u32;
        let (q, r) = m.div_rem(&p);
        if r < BigUint::from(j) && !q.is_zero() {
            out.push((j, q.clone()));
        }
        // l = q + 1: m > (q+1)·10^j - j  ⇔  r + j > 10^j
        if &r + j > p {
            out.push((j, q + 1u32));
        }
        if first_only && !out.is_empty() {
            break;
        }
    }
    out
}

/// `c(n)`: length of the maximal run of `S` ending at `n`.
pub fn product_exponent(n: &BigUint) -> u64 {
    if let Some(n) = n.to_u64() {
        return product_exponent_u64(n);
    }
    let mut c = 0u64;
    let mut m = n.clone();
    while s_contains(&m) {
        c += 1;
        m -= 1u32;
    }
    c
}

pub fn product_exponent_u64(n: u64) -> u64 {
    let mut c = 0u64;
    let mut m = n;
    while m > 0 && s_contains_u64(m) {
        c += 1;
        m -= 1;
    }
    c
}

/// `c(n)` for every `n ∈ [lo, hi]`, by one walk and a forward scan.
pub fn run_lengths(lo: u64, hi: u64) -> Vec<u64> {
    if lo > hi {
        return Vec::new();
    }
    let mut out = Vec::with_capacity((hi - lo + 1) as usize);
    let mut c = if lo == 0 { 0 } else { product_exponent_u64(lo - 1) };
    for n in lo..=hi {
        c = if s_contains_u64(n) { c + 1 } else { 0 };
        out.push(c);
    }
    out
}

/// `log2 w_k` for `k >= 1`.
pub fn weight_log2(k: &BigUint) -> i64 {
    if s_contains(k) {
        1
    } else if k.is_zero() {
        0
    } else {
        let prev = k - 1u32;
        -(product_exponent(&prev) as i64)
    }
}

pub fn weight_log2_u64(k: u64) -> i64 {
    if s_contains_u64(k) {
        1
    } else if k == 0 {
        0
    } else {
        -(product_exponent_u64(k - 1) as i64)
    }
}

/// Members of `S ∩ [a, b]` by marking every interval that meets the range.
pub fn s_members_u64(a: u64, b: u64) -> Vec<u64> {
    if a > b {
        return Vec::new();
    }
    let width = (b - a + 1) as usize;
    let mut hit = vec![false; width];
    let (a128, b128) = (u128::from(a), u128::from(b));
    let mut p = 1u128;
    for j in 1..=u128::from(digits_u128(b128)) {
        p *= 10;
        let l_lo = ((a128 + j) / p).max(1);
        let l_hi = (b128 + j) / p + 1;
        for l in l_lo..=l_hi {
            let centre = l * p;
            let lo = (centre + 1).saturating_sub(j).max(a128);
            let hi = (centre + j - 1).min(b128);
            for m in lo..=hi {
                hit[(m - a128) as usize] = true;
            }
        }
    }
    hit.iter()
        .enumerate()
        .filter(|(_, &h)| h)
        .map(|(i, _)| a + i as u64)
        .collect()
}

/// The set `S`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SSet;

impl IndexSet for SSet {
    fn kind(&self) -> SetKind {
        SetKind::Derived
    }

    fn contains(&self, n: &BigUint) -> bool {
        s_contains(n)
    }

    fn contains_u64(&self, n: u64) -> bool {
        s_contains_u64(n)
    }

    fn members_u64(&self, a: u64, b: u64) -> Vec<u64> {
        s_members_u64(a, b)
    }

    fn spec(&self) -> Option<SetSpec> {
        Some(SetSpec::SSet)
    }
}

/// The weight sequence `w` above, as exact powers of two.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CounterexampleWeights;

impl CounterexampleWeights {
    pub fn weight_log2(&self, k: &BigUint) -> i64 {
        weight_log2(k)
    }

    /// `log2(w_1···w_n) = c(n)`.
    pub fn product_log2(&self, n: &BigUint) -> u64 {
        product_exponent(n)
    }

    pub fn weight(&self, k: u64) -> f64 {
        2f64.powi(weight_log2_u64(k) as i32)
    }
}
