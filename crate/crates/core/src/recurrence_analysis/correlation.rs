//! Estimates of `η_k = lim |A ∩ (A - k) ∩ [m_i, m_i + k_i[| / k_i` over a
//! finite list of windows, and the syndetic set `F = {k : η_k > (1-ε)δ²}`.

use num_rational::Ratio;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::index_sets::{estimate_densities, syndetic_from_members, IndexSet, SyndeticEvidence};

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationReport {
    pub delta: Ratio<u64>,
    pub epsilon: Ratio<u64>,
    /// `eta[k - 1] = η_k` for `k = 1..=k_max`.
    pub eta: Vec<Ratio<u64>>,
    /// `(1 - ε) δ²`.
    pub threshold: Ratio<u128>,
    pub f: Vec<u64>,
    pub f_evidence: Option<SyndeticEvidence>,
    /// Half-open windows `[m, m + s[`.
    pub windows: Vec<(u64, u64)>,
    /// `(1 - δ(1 - ε)) / (δ ε)`.
    pub r_bound: f64,
    /// A maximal set found greedily with no pairwise difference in `F`.
    pub antichain: Vec<u64>,
}

impl CorrelationReport {
    pub fn eta_k(&self, k: u64) -> Option<Ratio<u64>> {
        k.checked_sub(1).and_then(|i| self.eta.get(i as usize)).copied()
    }

    pub fn in_f(&self, k: u64) -> bool {
        self.f.binary_search(&k).is_ok()
    }

    /// CSV with header `k,eta_k,in_F`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,eta_k,in_F\n");
        for (i, e) in self.eta.iter().enumerate() {
            let k = i as u64 + 1;
            out.push_str(&format!(
                "{k},{:.9},{}\n",
                *e.numer() as f64 / *e.denom() as f64,
                u8::from(self.in_f(k))
            ));
        }
        out
    }
}

fn widen(r: Ratio<u64>) -> Ratio<u128> {
    Ratio::new(u128::from(*r.numer()), u128::from(*r.denom()))
}

/// Windows `[m, m + s[` at the densest position for each length in the grid.
pub fn banach_anchor_windows(set: &dyn IndexSet, horizon: u64, grid: &[u64]) -> Result<Vec<(u64, u64)>> {
    let r = estimate_densities(set, horizon, grid)?;
    Ok(r.per_window.iter().map(|w| (w.max_at, w.s)).collect())
}

pub fn correlation_scan(
    set: &dyn IndexSet,
    epsilon: Ratio<u64>,
    k_max: u64,
    windows: &[(u64, u64)],
) -> Result<CorrelationReport> {
    if !(epsilon > Ratio::from_integer(0) && epsilon < Ratio::from_integer(1)) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if windows.is_empty() || windows.iter().any(|w| w.1 == 0) {
        return Err(Error::InvalidArgument("need nonempty windows of positive length".into()));
    }
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be >= 1".into()));
    }

    // per window: |A ∩ W| and |A ∩ (A - k) ∩ W| for each k
    let counts: Vec<(u64, Vec<u64>)> = windows
        .par_iter()
        .map(|&(m, s)| {
            let hi = m + s - 1 + k_max;
            let mut bits = vec![false; (hi - m + 1) as usize];
            for x in set.members_u64(m, hi) {
                bits[(x - m) as usize] = true;
            }
            let inside = bits[..s as usize].iter().filter(|&&b| b).count() as u64;
            let pairs = (1..=k_max as usize)
                .map(|k| (0..s as usize).filter(|&i| bits[i] && bits[i + k]).count() as u64)
                .collect();
            (inside, pairs)
        })
        .collect();

    let best = |f: &dyn Fn(usize) -> u64| {
        windows
            .iter()
            .enumerate()
            .map(|(w, &(_, s))| Ratio::new(f(w), s))
            .max()
            .expect("non-empty")
    };
    let delta = best(&|w| counts[w].0);
    if delta == Ratio::from_integer(0) {
        return Err(Error::NoDensity);
    }
    let eta: Vec<Ratio<u64>> = (0..k_max as usize)
        .map(|k| best(&|w| counts[w].1[k]))
        .collect();

    let d = widen(delta);
    let threshold = (Ratio::from_integer(1) - widen(epsilon)) * d * d;
    let f: Vec<u64> = (1..=k_max).filter(|&k| widen(eta[k as usize - 1]) > threshold).collect();
    let f_evidence = if f.is_empty() {
        None
    } else {
        Some(syndetic_from_members(&f, k_max)?)
    };

    let df = *delta.numer() as f64 / *delta.denom() as f64;
    let ef = *epsilon.numer() as f64 / *epsilon.denom() as f64;
    let r_bound = (1.0 - df * (1.0 - ef)) / (df * ef);

    let mut antichain: Vec<u64> = Vec::new();
    for r in 0..=k_max {
        if antichain.iter().all(|&a| f.binary_search(&(r - a)).is_err()) {
            antichain.push(r);
        }
    }

    Ok(CorrelationReport {
        delta,
        epsilon,
        eta,
        threshold,
        f,
        f_evidence,
        windows: windows.to_vec(),
        r_bound,
        antichain,
    })
}
