use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{big, IndexSet, SetKind, SetSpec};
use crate::error::{Error, Result};

/// A finite set listed member by member.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExplicitSet {
    members: BTreeSet<BigUint>,
}

impl ExplicitSet {
    pub fn new<I: IntoIterator<Item = BigUint>>(members: I) -> Self {
        ExplicitSet {
            members: members.into_iter().collect(),
        }
    }

    pub fn from_u64<I: IntoIterator<Item = u64>>(members: I) -> Self {
        Self::new(members.into_iter().map(BigUint::from))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &BigUint> {
        self.members.iter()
    }

    pub fn to_u64_vec(&self) -> Vec<u64> {
        self.members.iter().filter_map(|m| m.to_u64()).collect()
    }
}

impl IndexSet for ExplicitSet {
    fn kind(&self) -> SetKind {
        SetKind::ExplicitList
    }

    fn contains(&self, n: &BigUint) -> bool {
        self.members.contains(n)
    }

    fn enumerate(&self, a: &BigUint, b: &BigUint) -> Vec<BigUint> {
        if a > b {
            return Vec::new();
        }
        self.members.range(a.clone()..=b.clone()).cloned().collect()
    }

    fn members_u64(&self, a: u64, b: u64) -> Vec<u64> {
        if a > b {
            return Vec::new();
        }
        self.members
            .range(big(a)..=big(b))
            .map(|m| m.to_u64().expect("bounded by b"))
            .collect()
    }

    fn count_window(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a > b {
            return BigUint::zero();
        }
        BigUint::from(self.members.range(a.clone()..=b.clone()).count())
    }

    fn spec(&self) -> Option<SetSpec> {
        Some(SetSpec::Explicit(self.members.iter().cloned().collect()))
    }
}

/// `{ n >= start : n mod period ∈ residues }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicSet {
    period: u64,
    residues: Vec<u64>,
    start: u64,
}

impl PeriodicSet {
    pub fn new(period: u64, residues: &[u64], start: u64) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidArgument("period must be positive".into()));
        }
        let mut residues: Vec<u64> = residues.to_vec();
        residues.sort_unstable();
        residues.dedup();
        if residues.iter().any(|&r| r >= period) {
            return Err(Error::InvalidArgument(format!(
                "residues must be below the period {period}"
            )));
        }
        Ok(PeriodicSet {
            period,
            residues,
            start,
        })
    }

    pub fn evens() -> Self {
        PeriodicSet::new(2, &[0], 0).expect("valid")
    }

    /// `{0, m, 2m, ...}`.
    pub fn multiples(m: u64) -> Result<Self> {
        PeriodicSet::new(m, &[0], 0)
    }

    /// `{offset + j * step : j >= 0}`.
    pub fn progression(step: u64, offset: u64) -> Result<Self> {
        PeriodicSet::new(step, &[offset % step.max(1)], offset)
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    /// `|A' ∩ [0, x)|` for the unrestricted periodic pattern `A'`.
    fn count_below(&self, x: &BigUint) -> BigUint {
        let p = big(self.period);
        let (q, r) = x.div_rem(&p);
        let r = r.to_u64().expect("remainder below period");
        let partial = self.residues.iter().filter(|&&res| res < r).count();
        q * BigUint::from(self.residues.len()) + BigUint::from(partial)
    }
}

impl IndexSet for PeriodicSet {
    fn kind(&self) -> SetKind {
        SetKind::Periodic
    }

    fn contains(&self, n: &BigUint) -> bool {
        if n < &big(self.start) {
            return false;
        }
        let r = (n % self.period).to_u64().expect("remainder below period");
        self.residues.binary_search(&r).is_ok()
    }

    fn contains_u64(&self, n: u64) -> bool {
        n >= self.start && self.residues.binary_search(&(n % self.period)).is_ok()
    }

    fn enumerate(&self, a: &BigUint, b: &BigUint) -> Vec<BigUint> {
        let a = a.max(&big(self.start)).clone();
        if &a > b || self.residues.is_empty() {
            return Vec::new();
        }
        let p = big(self.period);
        let mut base = &a - (&a % &p);
        let mut out = Vec::new();
        while &base <= b {
            for &r in &self.residues {
                let n = &base + r;
                if n >= a && &n <= b {
                    out.push(n);
                }
            }
            base += &p;
        }
        out
    }

    fn members_u64(&self, a: u64, b: u64) -> Vec<u64> {
        let a = a.max(self.start);
        if a > b || self.residues.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut base = a - a % self.period;
        while base <= b {
            for &r in &self.residues {
                let n = base + r;
                if n >= a && n <= b {
                    out.push(n);
                }
            }
            base = match base.checked_add(self.period) {
                Some(x) => x,
                None => break,
            };
        }
        out
    }

    fn count_window(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let a = a.max(&big(self.start)).clone();
        if &a > b {
            return BigUint::zero();
        }
        self.count_below(&(b + 1u32)) - self.count_below(&a)
    }

    fn anchors(&self, horizon: u64) -> Vec<u64> {
        vec![self.start.min(horizon)]
    }

    fn spec(&self) -> Option<SetSpec> {
        Some(SetSpec::Periodic {
            period: self.period,
            residues: self.residues.clone(),
            start: self.start,
        })
    }
}

/// A finite union of closed intervals `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalUnion {
    intervals: Vec<(BigUint, BigUint)>,
}

impl IntervalUnion {
    /// Sorts and merges overlapping or adjacent intervals; empty intervals
    /// (`lo > hi`) are dropped.
    pub fn new<I: IntoIterator<Item = (BigUint, BigUint)>>(intervals: I) -> Self {
        let mut v: Vec<(BigUint, BigUint)> =
            intervals.into_iter().filter(|(lo, hi)| lo <= hi).collect();
        v.sort();
        let mut merged: Vec<(BigUint, BigUint)> = Vec::with_capacity(v.len());
        for (lo, hi) in v {
            if let Some(last) = merged.last_mut() {
                if lo <= &last.1 + 1u32 {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                    continue;
                }
            }
            merged.push((lo, hi));
        }
        IntervalUnion { intervals: merged }
    }

    pub fn from_u64<I: IntoIterator<Item = (u64, u64)>>(intervals: I) -> Self {
        Self::new(intervals.into_iter().map(|(a, b)| (big(a), big(b))))
    }

    pub fn intervals(&self) -> &[(BigUint, BigUint)] {
        &self.intervals
    }

    fn first_candidate(&self, a: &BigUint) -> usize {
        self.intervals.partition_point(|(_, hi)| hi < a)
    }
}

impl IndexSet for IntervalUnion {
    fn kind(&self) -> SetKind {
        SetKind::IntervalUnion
    }

    fn contains(&self, n: &BigUint) -> bool {
        let i = self.first_candidate(n);
        self.intervals
            .get(i)
            .is_some_and(|(lo, hi)| lo <= n && n <= hi)
    }

    fn enumerate(&self, a: &BigUint, b: &BigUint) -> Vec<BigUint> {
        let mut out = Vec::new();
        for (lo, hi) in &self.intervals[self.first_candidate(a)..] {
            if lo > b {
                break;
            }
            let mut n = lo.max(a).clone();
            let end = hi.min(b);
            while &n <= end {
                out.push(n.clone());
                n += 1u32;
            }
        }
        out
    }

    fn members_u64(&self, a: u64, b: u64) -> Vec<u64> {
        if a > b {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (lo, hi) in &self.intervals[self.first_candidate(&big(a))..] {
            let Some(lo) = lo.to_u64() else { break };
            if lo > b {
                break;
            }
            let hi = hi.to_u64().unwrap_or(u64::MAX).min(b);
            out.extend(lo.max(a)..=hi);
        }
        out
    }

    fn count_window(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let mut total = BigUint::zero();
        if a > b {
            return total;
        }
        for (lo, hi) in &self.intervals[self.first_candidate(a)..] {
            if lo > b {
                break;
            }
            let start = lo.max(a);
            let end = hi.min(b);
            total += end - start + 1u32;
        }
        total
    }

    fn anchors(&self, horizon: u64) -> Vec<u64> {
        self.intervals
            .iter()
            .filter_map(|(lo, _)| lo.to_u64())
            .take_while(|&lo| lo <= horizon)
            .collect()
    }

    fn spec(&self) -> Option<SetSpec> {
        Some(SetSpec::Intervals(self.intervals.clone()))
    }
}

/// `∪_{n >= 0} [n!, n! + n]`: upper Banach density one, density zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FactorialBlocks;

impl FactorialBlocks {
    /// Blocks `[n!, n!+n]` with `n! <= limit`.
    pub fn blocks_up_to(limit: &BigUint) -> Vec<(BigUint, BigUint)> {
        let mut out = Vec::new();
        let mut fact = BigUint::one();
        let mut n = 0u64;
        while &fact <= limit {
            out.push((fact.clone(), &fact + n));
            n += 1;
            fact *= n;
        }
        out
    }

    fn union_up_to(limit: &BigUint) -> IntervalUnion {
        IntervalUnion::new(Self::blocks_up_to(limit))
    }
}

impl IndexSet for FactorialBlocks {
    fn kind(&self) -> SetKind {
        SetKind::IntervalUnion
    }

    fn contains(&self, n: &BigUint) -> bool {
        Self::union_up_to(n).contains(n)
    }

    fn enumerate(&self, a: &BigUint, b: &BigUint) -> Vec<BigUint> {
        Self::union_up_to(b).enumerate(a, b)
    }

    fn members_u64(&self, a: u64, b: u64) -> Vec<u64> {
        Self::union_up_to(&big(b)).members_u64(a, b)
    }

    fn count_window(&self, a: &BigUint, b: &BigUint) -> BigUint {
        Self::union_up_to(b).count_window(a, b)
    }

    fn anchors(&self, horizon: u64) -> Vec<u64> {
        Self::union_up_to(&big(horizon)).anchors(horizon)
    }

    fn spec(&self) -> Option<SetSpec> {
        Some(SetSpec::Factorial)
    }
}

/// `{ base^k : k >= 0 }`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PowerSet {
    base: u64,
}

impl PowerSet {
    pub fn new(base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidArgument("power base must be at least 2".into()));
        }
        Ok(PowerSet { base })
    }
}

impl IndexSet for PowerSet {
    fn kind(&self) -> SetKind {
        SetKind::Derived
    }

    fn contains(&self, n: &BigUint) -> bool {
        if n.is_zero() {
            return false;
        }
        let mut m = n.clone();
        let b = big(self.base);
        while (&m % &b).is_zero() {
            m /= &b;
        }
        m.is_one()
    }

    fn enumerate(&self, a: &BigUint, b: &BigUint) -> Vec<BigUint> {
        let mut out = Vec::new();
        let mut p = BigUint::one();
        while &p <= b {
            if &p >= a {
                out.push(p.clone());
            }
            p *= self.base;
        }
        out
    }

    fn members_u64(&self, a: u64, b: u64) -> Vec<u64> {
        self.enumerate(&big(a), &big(b))
            .into_iter()
            .map(|m| m.to_u64().expect("bounded"))
            .collect()
    }

    fn spec(&self) -> Option<SetSpec> {
        Some(SetSpec::Powers { base: self.base })
    }
}

/// `{ k^2 : k >= 0 }`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SquareSet;

impl IndexSet for SquareSet {
    fn kind(&self) -> SetKind {
        SetKind::Derived
    }

    fn contains(&self, n: &BigUint) -> bool {
        let r = n.sqrt();
        &(&r * &r) == n
    }

    fn enumerate(&self, a: &BigUint, b: &BigUint) -> Vec<BigUint> {
        let mut k = a.sqrt();
        if &(&k * &k) < a {
            k += 1u32;
        }
        let mut out = Vec::new();
        loop {
            let sq = &k * &k;
            if &sq > b {
                break;
            }
            out.push(sq);
            k += 1u32;
        }
        out
    }

    fn members_u64(&self, a: u64, b: u64) -> Vec<u64> {
        self.enumerate(&big(a), &big(b))
            .into_iter()
            .map(|m| m.to_u64().expect("bounded"))
            .collect()
    }

    fn spec(&self) -> Option<SetSpec> {
        Some(SetSpec::Squares)
    }
}

/// `{ scale * p^j : j >= 1 }` for a prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimePowerSet {
    prime: u64,
    scale: u64,
}

impl PrimePowerSet {
    pub fn new(prime: u64, scale: u64) -> Result<Self> {
        if prime < 2 || !is_prime(prime) {
            return Err(Error::InvalidArgument(format!("{prime} is not prime")));
        }
        if scale == 0 {
            return Err(Error::InvalidArgument("scale must be positive".into()));
        }
        Ok(PrimePowerSet { prime, scale })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The `k`-th prime, `k >= 1`.
pub(crate) fn nth_prime(k: usize) -> u64 {
    (2u64..).filter(|&n| is_prime(n)).nth(k - 1).expect("primes are infinite")
}

impl IndexSet for PrimePowerSet {
    fn kind(&self) -> SetKind {
        SetKind::Derived
    }

    fn contains(&self, n: &BigUint) -> bool {
        let s = big(self.scale);
        if n.is_zero() || !(n % &s).is_zero() {
            return false;
        }
        let mut m = n / &s;
        let p = big(self.prime);
        let mut j = 0;
        while (&m % &p).is_zero() {
            m /= &p;
            j += 1;
        }
        j >= 1 && m.is_one()
    }

    fn enumerate(&self, a: &BigUint, b: &BigUint) -> Vec<BigUint> {
        let mut out = Vec::new();
        let mut v = big(self.scale) * self.prime;
        while &v <= b {
            if &v >= a {
                out.push(v.clone());
            }
            v *= self.prime;
        }
        out
    }

    fn members_u64(&self, a: u64, b: u64) -> Vec<u64> {
        self.enumerate(&big(a), &big(b))
            .into_iter()
            .map(|m| m.to_u64().expect("bounded"))
            .collect()
    }

    fn spec(&self) -> Option<SetSpec> {
        Some(SetSpec::PrimePowers {
            prime: self.prime,
            scale: self.scale,
        })
    }
}
