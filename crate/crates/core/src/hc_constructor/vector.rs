//! Assembly of `x = Σ_{n ∈ A} S^n z_n` and its orbit audit.

use rayon::prelude::*;

use super::plan::tail_ratio;
use super::ConstructionPlan;
use crate::error::{Error, Result};
use crate::sequence_spaces::SparseVec;
use crate::weighted_shifts::ShiftOperator;

/// Terms `S^d y` with `log2 ‖S^d y‖` below this are zero in `f64`.
const UNDERFLOW_LOG2: f64 = -1100.0;

#[derive(Clone, Debug)]
pub struct HCVector {
    /// `Σ S^n z_n` over the terms, materialized in `f64`. Entries far out
    /// underflow; the orbit audit works from the terms instead.
    pub x: SparseVec,
    pub plan: ConstructionPlan,
    pub truncation: u64,
    /// `(n, l)` with `n ∈ A_{k_l} ∩ [0, truncation]`, increasing in `n`.
    pub terms: Vec<(u64, usize)>,
}

fn materialize(t: &ShiftOperator, plan: &ConstructionPlan, terms: &[(u64, usize)]) -> Result<SparseVec> {
    let mut x = SparseVec::zero(t.space());
    for &(n, l) in terms {
        x = x.add(&t.apply_right_inverse(&plan.targets[l - 1], n)?)?;
    }
    Ok(x)
}

/// Sums `S^n z_n` over `n ∈ ∪_l A_{k_l} ∩ [0, truncation]`.
pub fn assemble_vector(plan: ConstructionPlan, t: &ShiftOperator, truncation: u64) -> Result<HCVector> {
    let mut terms: Vec<(u64, usize)> = (1..=plan.depth())
        .flat_map(|l| {
            plan.level_members(l, 0, truncation)
                .into_iter()
                .map(move |n| (n, l))
        })
        .collect();
    terms.sort_unstable();
    let x = materialize(t, &plan, &terms)?;
    Ok(HCVector {
        x,
        plan,
        truncation,
        terms,
    })
}

impl HCVector {
    /// `x` minus the exact sum of its terms; zero unless `x` was edited.
    pub fn residual(&self, t: &ShiftOperator) -> Result<SparseVec> {
        self.x.sub(&materialize(t, &self.plan, &self.terms)?)
    }

    /// `B^n x`, with `B^n S^i = S^{i-n}` for `i >= n` and `B^{n-i}` below.
    pub fn orbit_point(&self, t: &ShiftOperator, residual: &SparseVec, n: u64) -> Result<SparseVec> {
        let mut out = t.apply_backward(residual, n)?;
        for &(i, l) in &self.terms {
            let z = &self.plan.targets[l - 1];
            let term = if i >= n {
                if t.log2_norm_right_inverse(z, i - n) < UNDERFLOW_LOG2 {
                    continue;
                }
                t.apply_right_inverse(z, i - n)?
            } else {
                t.apply_backward(z, n - i)?
            };
            if !term.is_zero() {
                out = out.add(&term)?;
            }
        }
        Ok(out)
    }

    /// Bound on `Σ ‖B^n S^i z_i‖` over the omitted `i > truncation` of the
    /// selected levels; `None` when the weights give no geometric tail.
    pub fn truncation_term(&self, t: &ShiftOperator, n: u64) -> Option<f64> {
        let r = tail_ratio(t)?;
        let mut total = 0.0;
        for l in 1..=self.plan.depth() {
            let beyond = self
                .plan
                .level_members(l, self.truncation + 1, 2 * self.truncation + 1);
            let next = beyond.first().copied().unwrap_or(2 * self.truncation + 2);
            let z = &self.plan.targets[l - 1];
            total += t.log2_norm_right_inverse(z, next - n).exp2() / (1.0 - r);
        }
        Some(total)
    }
}

/// `1/2^{l-2} + 1/2^{l-2} + 1/2^l`.
pub fn orbit_bound(l: usize) -> f64 {
    9.0 * (-(l as f64)).exp2()
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitLevel {
    pub l: usize,
    pub k: usize,
    pub checked: usize,
    /// Largest `‖B^n x - y_l‖` over the checked `n`.
    pub worst: f64,
    pub worst_at: Option<u64>,
    pub bound: f64,
    /// Largest truncation term over the checked `n`; infinite if unknown.
    pub truncation_term: f64,
    /// `bound + truncation_term - worst`.
    pub slack: f64,
    pub violations: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitReport {
    pub horizon: u64,
    pub truncation: u64,
    pub levels: Vec<OrbitLevel>,
    /// `(l, n, ‖B^n x - y_l‖)` for every checked pair, sorted.
    pub distances: Vec<(usize, u64, f64)>,
}

impl OrbitReport {
    pub fn passed(&self) -> bool {
        self.levels.iter().all(|l| l.violations.is_empty())
    }

    /// `l,k,checked,worst,worst_at,bound,truncation_term,slack,violations`.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("l,k,checked,worst,worst_at,bound,truncation_term,slack,violations\n");
        for r in &self.levels {
            out.push_str(&format!(
                "{},{},{},{:e},{},{:e},{:e},{:e},{}\n",
                r.l,
                r.k,
                r.checked,
                r.worst,
                r.worst_at.map_or(String::new(), |n| n.to_string()),
                r.bound,
                r.truncation_term,
                r.slack,
                r.violations.len()
            ));
        }
        out
    }
}

/// Checks `‖B^n x - y_l‖ <= bound + truncation term` for every `l` and
/// every `n ∈ A_{k_l} ∩ [0, horizon]`. Other `n` carry no claim.
pub fn verify_orbit_bounds(v: &HCVector, t: &ShiftOperator, horizon: u64) -> Result<OrbitReport> {
    if horizon > v.truncation {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} exceeds the truncation {}",
            v.truncation
        )));
    }
    let residual = v.residual(t)?;
    let pairs: Vec<(usize, u64)> = (1..=v.plan.depth())
        .flat_map(|l| v.plan.level_members(l, 0, horizon).into_iter().map(move |n| (l, n)))
        .collect();
    let rows: Vec<(usize, u64, f64, f64)> = pairs
        .par_iter()
        .map(|&(l, n)| -> Result<(usize, u64, f64, f64)> {
            let d = v.orbit_point(t, &residual, n)?.distance(&v.plan.targets[l - 1])?;
            let trunc = v.truncation_term(t, n).unwrap_or(f64::INFINITY);
            Ok((l, n, d, trunc))
        })
        .collect::<Result<_>>()?;

    let mut levels = Vec::new();
    for l in 1..=v.plan.depth() {
        let bound = orbit_bound(l);
        let mut lv = OrbitLevel {
            l,
            k: v.plan.selected[l - 1],
            checked: 0,
            worst: 0.0,
            worst_at: None,
            bound,
            truncation_term: 0.0,
            slack: 0.0,
            violations: Vec::new(),
        };
        for &(_, n, d, trunc) in rows.iter().filter(|r| r.0 == l) {
            lv.checked += 1;
            if lv.worst_at.is_none() || d > lv.worst {
                lv.worst = d;
                lv.worst_at = Some(n);
            }
            lv.truncation_term = lv.truncation_term.max(trunc);
            if d > bound + trunc {
                lv.violations.push(n);
            }
        }
        lv.slack = bound + lv.truncation_term - lv.worst;
        levels.push(lv);
    }
    let mut distances: Vec<(usize, u64, f64)> = rows.iter().map(|r| (r.0, r.1, r.2)).collect();
    distances.sort_by_key(|a| (a.0, a.1));
    Ok(OrbitReport {
        horizon,
        truncation: v.truncation,
        levels,
        distances,
    })
}
