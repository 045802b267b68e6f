//! `D_j = {n >= 1 : w_1···w_n >= 2^j}` and its cover
//! `E_j = ∪_{k >= ⌈j/30⌉} ∪_{l >= 1} ]l·10^k - 31k, l·10^k + 31k[`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::{digits_u128, product_exponent, run_lengths};
use crate::error::{Error, Result};
use crate::index_sets::{IndexSet, SetKind, SetSpec};

const CHUNK: u64 = 1 << 16;

fn e_start(j: u64) -> u64 {
    j.div_ceil(30).max(1)
}

/// `8 (9⌈j/30⌉ + 1) 10^{1-⌈j/30⌉}`.
pub fn dj_bound(j: u64) -> f64 {
    let k = j.div_ceil(30) as f64;
    8.0 * (9.0 * k + 1.0) * 10f64.powf(1.0 - k)
}

pub fn e_contains_u64(j: u64, m: u64) -> bool {
    let m = u128::from(m);
    let first = u128::from(e_start(j));
    let last = u128::from(digits_u128(m));
    (first..=last).any(|k| {
        let p = 10u128.pow(k as u32);
        let (q, r) = (m / p, m % p);
        let w = 31 * k;
        (r < w && q >= 1) || r + w > p
    })
}

pub fn e_contains(j: u64, m: &BigUint) -> bool {
    if let Some(m) = m.to_u64() {
        return e_contains_u64(j, m);
    }
    let last = m.to_str_radix(10).len() as u64;
    (e_start(j)..=last).any(|k| {
        let p = BigUint::from(10u32).pow(k as u32);
        let (q, r) = m.div_rem(&p);
        let w = BigUint::from(31 * k);
        (r < w && !q.is_zero()) || r + w > p
    })
}

/// `c(n)` for `n ∈ [0, horizon]`, computed in parallel chunks.
pub(crate) fn runs_to(horizon: u64) -> Vec<u64> {
    let chunks: Vec<(u64, u64)> = (0..=horizon / CHUNK)
        .map(|i| (i * CHUNK, ((i + 1) * CHUNK - 1).min(horizon)))
        .filter(|(a, b)| a <= b)
        .collect();
    chunks
        .par_iter()
        .map(|&(a, b)| run_lengths(a, b))
        .collect::<Vec<_>>()
        .concat()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DjRow {
    pub n: u64,
    /// `|D_j ∩ [1, N]|`.
    pub count: u64,
    pub ratio: Ratio<u64>,
    pub bound: f64,
    /// The bound is informative (`< 1`) and respected.
    pub bound_applies: bool,
    pub within_bound: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DjScan {
    pub j: u64,
    pub horizon: u64,
    pub rows: Vec<DjRow>,
    /// Points of `D_j ∩ [1, horizon]` tested against `E_j`.
    pub e_checked: u64,
    pub e_failures: Vec<u64>,
}

impl DjScan {
    pub fn passed(&self) -> bool {
        self.e_failures.is_empty() && self.rows.iter().all(|r| r.within_bound)
    }

    /// CSV with header `N,count,ratio,bound`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,count,ratio,bound\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{:.9},{:.9}\n",
                r.n,
                r.count,
                *r.ratio.numer() as f64 / *r.ratio.denom() as f64,
                r.bound
            ));
        }
        out
    }
}

fn scan_from_runs(j: u64, horizon: u64, runs: &[u64]) -> DjScan {
    let bound = dj_bound(j);
    let mut rows = Vec::new();
    let mut count = 0u64;
    let mut next = 100u64;
    let mut e_checked = 0u64;
    let mut e_failures = Vec::new();
    for n in 1..=horizon {
        if runs[n as usize] >= j {
            count += 1;
            e_checked += 1;
            if !e_contains_u64(j, n) {
                e_failures.push(n);
            }
        }
        if n == next {
            let ratio = Ratio::new(count, n);
            let applies = bound < 1.0;
            let within = !applies || (count as f64) / (n as f64) <= bound;
            rows.push(DjRow {
                n,
                count,
                ratio,
                bound,
                bound_applies: applies,
                within_bound: within,
            });
            next = next.saturating_mul(10);
        }
    }
    DjScan {
        j,
        horizon,
        rows,
        e_checked,
        e_failures,
    }
}

/// Prefix densities of `D_j` at `N = 10^2, 10^3, ... <= horizon`.
pub fn dj_density_scan(j: u64, horizon: u64) -> Result<DjScan> {
    Ok(dj_density_scans(&[j], horizon)?.remove(0))
}

/// Several `j` sharing one pass over `c(n)`.
pub fn dj_density_scans(js: &[u64], horizon: u64) -> Result<Vec<DjScan>> {
    if horizon < 100 {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} must be at least 100"
        )));
    }
    if js.contains(&0) {
        return Err(Error::InvalidArgument("j must be >= 1".into()));
    }
    let runs = runs_to(horizon);
    Ok(js
        .par_iter()
        .map(|&j| scan_from_runs(j, horizon, &runs))
        .collect())
}

/// `D_j` as an index set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DSet {
    pub j: u64,
}

impl DSet {
    pub fn new(j: u64) -> Result<Self> {
        if j == 0 {
            return Err(Error::InvalidArgument("j must be >= 1".into()));
        }
        Ok(DSet { j })
    }
}

impl IndexSet for DSet {
    fn kind(&self) -> SetKind {
        SetKind::Derived
    }

    fn contains(&self, n: &BigUint) -> bool {
        !n.is_zero() && product_exponent(n) >= self.j
    }

    fn members_u64(&self, a: u64, b: u64) -> Vec<u64> {
        let a = a.max(1);
        run_lengths(a, b)
            .into_iter()
            .zip(a..=b)
            .filter(|(c, _)| *c >= self.j)
            .map(|(_, n)| n)
            .collect()
    }

    fn spec(&self) -> Option<SetSpec> {
        Some(SetSpec::DSet { j: self.j })
    }
}

/// `E_j` as an index set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ESet {
    pub j: u64,
}

impl ESet {
    pub fn new(j: u64) -> Result<Self> {
        if j == 0 {
            return Err(Error::InvalidArgument("j must be >= 1".into()));
        }
        Ok(ESet { j })
    }
}

impl IndexSet for ESet {
    fn kind(&self) -> SetKind {
        SetKind::Derived
    }

    fn contains(&self, n: &BigUint) -> bool {
        e_contains(self.j, n)
    }

    fn contains_u64(&self, n: u64) -> bool {
        e_contains_u64(self.j, n)
    }

    fn spec(&self) -> Option<SetSpec> {
        Some(SetSpec::ESet { j: self.j })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexample_c0::s_contains_u64;

    #[test]
    fn bound_values() {
        assert!((dj_bound(1) - 80.0).abs() < 1e-12);
        assert!((dj_bound(91) - 8.0 * 37.0 * 1e-3).abs() < 1e-12);
        assert!(dj_bound(90) >= 1.0 && dj_bound(91) < 1.0);
    }

    #[test]
    fn d1_is_s() {
        let scan = dj_density_scan(1, 10_000).unwrap();
        let s_count = (1..=10_000).filter(|&n| s_contains_u64(n)).count() as u64;
        assert_eq!(scan.rows.last().unwrap().n, 10_000);
        assert_eq!(scan.rows.last().unwrap().count, s_count);
    }

    #[test]
    fn e_membership() {
        // k = 3 intervals have radius 93
        assert!(e_contains_u64(61, 1092));
        assert!(!e_contains_u64(61, 1093));
        assert!(e_contains_u64(61, 908));
        assert!(!e_contains_u64(61, 907));
        assert!(e_contains_u64(1, 12345));
        for m in [907u64, 1093, 55_555, 10_000_031] {
            assert_eq!(e_contains(61, &BigUint::from(m)), e_contains_u64(61, m));
        }
    }

    #[test]
    fn rejects_short_horizon() {
        assert!(dj_density_scan(1, 99).is_err());
    }
}
