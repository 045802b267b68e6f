//! `β_n = Σ_{m ∈ A} α_{m-n}` and the two sums bounded by one along a
//! hitting set of a weighted shift.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::index_sets::IndexSet;
use crate::weighted_shifts::WeightSequence;

#[derive(Clone, Debug, PartialEq)]
pub enum AlphaKind {
    /// `α_n = 1` for `n >= 1`.
    Ones,
    /// `α_n = 1/n` for `n >= 1`.
    Harmonic,
    /// `α_n = 1/|w_1···w_n|^p` for `n >= 1`.
    InverseProducts { weights: WeightSequence, p: f64 },
}

/// `α` with `α_n >= C α_{n-1}` for `n < N` and `α_n = 0` for `n >= N`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaProfile {
    pub kind: AlphaKind,
    pub c: f64,
    /// `N`, or `None` for `N = +∞`.
    pub cutoff: Option<i64>,
}

impl AlphaProfile {
    pub fn new(kind: AlphaKind, c: f64, cutoff: Option<i64>) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::InvalidArgument(format!("C must be positive, got {c}")));
        }
        Ok(AlphaProfile { kind, c, cutoff })
    }

    pub fn value(&self, n: i64) -> f64 {
        if n <= 0 || self.cutoff.is_some_and(|cut| n >= cut) {
            return 0.0;
        }
        match &self.kind {
            AlphaKind::Ones => 1.0,
            AlphaKind::Harmonic => 1.0 / n as f64,
            AlphaKind::InverseProducts { weights, p } => (-p * weights.log2_product(n)).exp2(),
        }
    }

    /// First `n ∈ [-horizon, horizon]`, `n < N`, with `α_n < C α_{n-1}`.
    pub fn first_violation(&self, horizon: u64) -> Option<i64> {
        let h = horizon as i64;
        let top = self.cutoff.map_or(h, |cut| (cut - 1).min(h));
        (-h..=top).find(|&n| self.value(n) < self.c * self.value(n - 1) * (1.0 - 1e-12))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BetaReport {
    pub horizon: u64,
    /// `(n, β_n)` for `n ∈ A ∩ [0, horizon]`, sums truncated at `m <= horizon`.
    pub values: Vec<(u64, f64)>,
    /// `Σ_{n <= horizon} α_n`.
    pub alpha_sum: f64,
    /// `(H', max_{n ∈ A, n <= H'} β_n^{(H')})` for `H' = horizon / 2^i`,
    /// increasing in `H'`.
    pub growth: Vec<(u64, f64)>,
    /// The last growth value exceeds the one at `horizon / 8`.
    pub growing: bool,
}

fn betas(members: &[u64], alpha: &AlphaProfile) -> Vec<f64> {
    members
        .par_iter()
        .map(|&n| {
            members
                .iter()
                .filter(|&&m| m > n)
                .map(|&m| alpha.value((m - n) as i64))
                .sum::<f64>()
                + members
                    .iter()
                    .filter(|&&m| m <= n)
                    .map(|&m| alpha.value(m as i64 - n as i64))
                    .sum::<f64>()
        })
        .collect()
}

pub fn beta_sequence(set: &dyn IndexSet, alpha: &AlphaProfile, horizon: u64) -> Result<BetaReport> {
    if let Some(n) = alpha.first_violation(horizon) {
        return Err(Error::ProfileViolation { index: n });
    }
    let members = set.members_u64(0, horizon);
    let values: Vec<(u64, f64)> = members.iter().copied().zip(betas(&members, alpha)).collect();
    let alpha_sum = (1..=horizon as i64).map(|n| alpha.value(n)).sum();

    let mut checkpoints = Vec::new();
    let mut h = horizon;
    while h >= 1 && checkpoints.len() < 12 {
        checkpoints.push(h);
        h /= 2;
    }
    checkpoints.reverse();
    let growth: Vec<(u64, f64)> = checkpoints
        .iter()
        .map(|&h| {
            let sub: Vec<u64> = members.iter().copied().filter(|&m| m <= h).collect();
            (h, betas(&sub, alpha).into_iter().fold(0.0, f64::max))
        })
        .collect();
    let last = growth.last().map_or(0.0, |g| g.1);
    let eighth = growth
        .iter()
        .rev()
        .find(|g| g.0 <= horizon / 8)
        .map_or(0.0, |g| g.1);
    Ok(BetaReport {
        horizon,
        values,
        alpha_sum,
        growth,
        growing: last > eighth,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EqBetaSums {
    pub n: u64,
    /// `Σ_{m < n, m ∈ A} |w_{m-n+1}···w_0|^p`; empty on `Z_+`.
    pub left_sum: f64,
    pub left_terms: usize,
    /// `Σ_{n < m <= horizon, m ∈ A} 1/|w_1···w_{m-n}|^p`.
    pub right_sum: f64,
    pub right_terms: usize,
}

/// The two sums along `A`; the left one only exists for bilateral shifts.
pub fn eqbeta_sums(
    w: &WeightSequence,
    p: f64,
    set: &dyn IndexSet,
    n: u64,
    horizon: u64,
    bilateral: bool,
) -> Result<EqBetaSums> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("p must be >= 1, got {p}")));
    }
    if !set.contains_u64(n) {
        return Err(Error::InvalidArgument(format!("{n} is not in A")));
    }
    let lo = if bilateral { -(n as i64) } else { 1 };
    if let Some(k) = w.first_zero(lo, horizon as i64) {
        return Err(Error::ZeroWeight { index: k });
    }
    let members = set.members_u64(0, horizon);
    let (mut left_sum, mut left_terms) = (0.0, 0);
    if bilateral {
        for &m in members.iter().filter(|&&m| m < n) {
            // w_{m-n+1}···w_0
            left_sum += (p * w.range_log2(m as i64 - n as i64, n - m)).exp2();
            left_terms += 1;
        }
    }
    let (mut right_sum, mut right_terms) = (0.0, 0);
    for &m in members.iter().filter(|&&m| m > n) {
        right_sum += (-p * w.log2_product((m - n) as i64)).exp2();
        right_terms += 1;
    }
    Ok(EqBetaSums {
        n,
        left_sum,
        left_terms,
        right_sum,
        right_terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index_sets::{ExplicitSet, FactorialBlocks, PeriodicSet};

    #[test]
    fn evens_with_ones() {
        let alpha = AlphaProfile::new(AlphaKind::Ones, 1.0, None).unwrap();
        let h = 2000;
        let r = beta_sequence(&PeriodicSet::evens(), &alpha, h).unwrap();
        for &(n, b) in &r.values {
            // even m in (n, h]
            assert_eq!(b, ((h - n) / 2) as f64);
        }
        assert!(r.growing);
    }

    #[test]
    fn finite_set_is_flat() {
        let alpha = AlphaProfile::new(AlphaKind::Ones, 1.0, None).unwrap();
        let r = beta_sequence(&ExplicitSet::from_u64([1, 4, 9]), &alpha, 5000).unwrap();
        assert!(!r.growing);
        assert_eq!(r.values, vec![(1, 2.0), (4, 1.0), (9, 0.0)]);
    }

    #[test]
    fn factorial_blocks_harmonic() {
        let alpha = AlphaProfile::new(AlphaKind::Harmonic, 0.5, None).unwrap();
        let r = beta_sequence(&FactorialBlocks, &alpha, 100_000).unwrap();
        assert!(r.growing);
        assert!(r.growth.windows(2).all(|g| g[1].1 >= g[0].1));
    }

    #[test]
    fn profile_violation() {
        // 1/n >= C/(n-1) fails at n = 2 when C > 1/2
        let alpha = AlphaProfile::new(AlphaKind::Harmonic, 0.75, None).unwrap();
        let err = beta_sequence(&PeriodicSet::evens(), &alpha, 100).unwrap_err();
        assert_eq!(err, Error::ProfileViolation { index: 2 });
    }

    #[test]
    fn eqbeta_two_b() {
        let w = WeightSequence::constant(2.0).unwrap();
        let a = ExplicitSet::from_u64([0, 10, 20]);
        let s = eqbeta_sums(&w, 2.0, &a, 10, 100, true).unwrap();
        assert_eq!(s.right_sum, 2f64.powi(-20));
        assert_eq!(s.left_sum, 2f64.powi(20));
        assert_eq!((s.left_terms, s.right_terms), (1, 1));
        let u = eqbeta_sums(&w, 2.0, &a, 10, 100, false).unwrap();
        assert_eq!((u.left_sum, u.left_terms), (0.0, 0));
        let single = ExplicitSet::from_u64([7]);
        let s = eqbeta_sums(&w, 1.0, &single, 7, 100, true).unwrap();
        assert_eq!((s.left_sum, s.right_sum), (0.0, 0.0));
        assert!(eqbeta_sums(&w, 1.0, &single, 8, 100, true).is_err());
    }
}
