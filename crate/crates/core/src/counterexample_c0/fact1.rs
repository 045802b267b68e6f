use num_bigint::BigUint;
use rayon::prelude::*;

use super::s_witnesses;

/// Smallest `n >= 0` with `10^{n-1} < k <= 10^n`.
fn decade(k: u64) -> u32 {
    let mut n = 0u32;
    let mut p = 1u64;
    while p < k {
        p *= 10;
        n += 1;
    }
    n
}

/// `l·10^k - R` and `l·10^k + R` with `R = Σ_{j=0}^{n} 10^j`.
pub fn fact1_candidates(k: u64, l: u64) -> [BigUint; 2] {
    let n = decade(k);
    let repunit = (BigUint::from(10u32).pow(n + 1) - 1u32) / 9u32;
    let centre = BigUint::from(l) * BigUint::from(10u32).pow(k as u32);
    [&centre - &repunit, centre + repunit]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fact1Violation {
    pub k: u64,
    pub l: u64,
    pub m: BigUint,
    /// `(j, l)` pairs of every interval of `S` containing `m`.
    pub witnesses: Vec<(u64, BigUint)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Fact1Report {
    pub k_max: u64,
    pub l_max: u64,
    pub checked: u64,
    pub in_s: u64,
    /// `m ∈ S` and no containing interval has `j > k`.
    pub violations: Vec<Fact1Violation>,
    /// `m ∈ S` through some interval with `j <= k` (the proof excludes these).
    pub low_witnesses: Vec<Fact1Violation>,
}

impl Fact1Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustive check over `1 <= k <= k_max`, `1 <= l <= l_max`.
pub fn verify_fact1(k_max: u64, l_max: u64) -> Fact1Report {
    let per_k: Vec<Fact1Report> = (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let mut r = Fact1Report::default();
            for l in 1..=l_max {
                for m in fact1_candidates(k, l) {
                    r.checked += 1;
                    let witnesses = s_witnesses(&m);
                    if witnesses.is_empty() {
                        continue;
                    }
                    r.in_s += 1;
                    let high = witnesses.iter().any(|(j, _)| *j > k);
                    let low = witnesses.iter().any(|(j, _)| *j <= k);
                    let record = Fact1Violation {
                        k,
                        l,
                        m,
                        witnesses,
                    };
                    if low {
                        r.low_witnesses.push(record.clone());
                    }
                    if !high {
                        r.violations.push(record);
                    }
                }
            }
            r
        })
        .collect();
    let mut out = Fact1Report {
        k_max,
        l_max,
        ..Default::default()
    };
    for r in per_k {
        out.checked += r.checked;
        out.in_s += r.in_s;
        out.violations.extend(r.violations);
        out.low_witnesses.extend(r.low_witnesses);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidates() {
        assert_eq!(fact1_candidates(1, 1), [BigUint::from(9u32), BigUint::from(11u32)]);
        assert_eq!(fact1_candidates(2, 1), [BigUint::from(89u32), BigUint::from(111u32)]);
        assert_eq!(decade(10), 1);
        assert_eq!(decade(11), 2);
    }

    #[test]
    fn small_sweep_passes() {
        let r = verify_fact1(2, 1);
        assert_eq!(r.checked, 4);
        assert_eq!(r.in_s, 0);
        assert!(r.passed());
    }
}
