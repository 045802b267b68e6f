//! Verified subsets of `N(U, V) = {n : T^n U ∩ V ≠ ∅}`.
//!
//! For each `n` the probes are `c_U` and
//! `u = c_U + S^n (c_V - B^n c_U + δ_q)` for small lattice perturbations
//! `δ_q`. Since `B^n S^n = I`, `B^n u = c_V + δ_q`, so `n` is a return
//! time as soon as `‖S^n (c_V - B^n c_U + δ_q)‖ < r_U` and `‖δ_q‖ < r_V`.
//! The norm of `S^n(·)` is evaluated in the log domain.

use rayon::prelude::*;

use super::Ball;
use crate::error::{Error, Result};
use crate::index_sets::{syndetic_from_members, SyndeticEvidence};
use crate::sequence_spaces::SparseVec;
use crate::weighted_shifts::ShiftOperator;

#[derive(Clone, Debug, PartialEq)]
pub struct ReturnSetReport {
    /// Verified members of `N(U, V) ∩ [0, horizon]`.
    pub members: Vec<u64>,
    pub horizon: u64,
    pub probes_per_step: usize,
    /// `None` when no return time was found.
    pub evidence: Option<SyndeticEvidence>,
}

impl ReturnSetReport {
    pub fn syndetic_subset_found(&self) -> bool {
        self.evidence.as_ref().is_some_and(|e| e.verdict)
    }

    pub fn label(&self) -> String {
        let head = match &self.evidence {
            Some(e) if e.verdict => format!("syndetic subset found, gap bound {}", e.gap_bound),
            Some(_) => "no syndetic subset found".to_string(),
            None => "no return times found".to_string(),
        };
        format!("{head} (under-approximation of N(U,V), evidence at horizon {})", self.horizon)
    }
}

/// `δ_0 = 0`, then `±(i / grid)·(r_V / 2)·e_0` for `i = 1, 2, ...`.
fn perturbations(space_v: &SparseVec, r_v: f64, grid: usize) -> Result<Vec<SparseVec>> {
    let space = space_v.space();
    let mut out = vec![SparseVec::zero(space)];
    let mut i = 1;
    while out.len() < grid {
        let a = i as f64 / grid as f64 * r_v / 2.0;
        out.push(SparseVec::from_entries(space, [(0, a)])?);
        if out.len() < grid {
            out.push(SparseVec::from_entries(space, [(0, -a)])?);
        }
        i += 1;
    }
    Ok(out)
}

fn is_return(t: &ShiftOperator, u: &Ball, v: &Ball, deltas: &[SparseVec], n: u64) -> Result<bool> {
    let bu = t.apply_backward(&u.center, n)?;
    if v.contains(&bu)? {
        return Ok(true);
    }
    let base = v.center.sub(&bu)?;
    for d in deltas {
        if !(d.norm() < v.radius) {
            continue;
        }
        let w = base.add(d)?;
        if w.is_zero() || t.log2_norm_right_inverse(&w, n) < u.radius.log2() {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn return_set(t: &ShiftOperator, u: &Ball, v: &Ball, horizon: u64, probe_grid: usize) -> Result<ReturnSetReport> {
    if u.center.space() != t.space() || v.center.space() != t.space() {
        return Err(Error::SpaceMismatch {
            left: t.space().to_string(),
            right: u.center.space().to_string(),
        });
    }
    let deltas = perturbations(&v.center, v.radius, probe_grid.max(1))?;
    let flags: Vec<bool> = (0..=horizon)
        .into_par_iter()
        .map(|n| is_return(t, u, v, &deltas, n))
        .collect::<Result<_>>()?;
    let members: Vec<u64> = (0..=horizon).filter(|&n| flags[n as usize]).collect();
    let evidence = if members.is_empty() {
        None
    } else {
        Some(syndetic_from_members(&members, horizon)?)
    };
    Ok(ReturnSetReport {
        members,
        horizon,
        probes_per_step: deltas.len() + 1,
        evidence,
    })
}

/// Samples of `N(x, U_n) - N(x, U_n) + n ⊆ N(U, V)`: for hitting times
/// `a < b` of `x` in a ball, `b - a + n` must be a return time whenever
/// `n` is one. Returns the sampled sums that are not in `members`.
pub fn difference_inclusion_failures(hits: &[u64], n: u64, members: &[u64], samples: usize) -> Vec<u64> {
    let mut failures = Vec::new();
    let limit = members.last().copied().unwrap_or(0);
    let mut seen = 0;
    'outer: for (i, &a) in hits.iter().enumerate() {
        for &b in &hits[i + 1..] {
            let m = b - a + n;
            if m > limit {
                break;
            }
            if members.binary_search(&m).is_err() {
                failures.push(m);
            }
            seen += 1;
            if seen >= samples {
                break 'outer;
            }
        }
    }
    failures
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence_spaces::SpaceSpec;

    #[test]
    fn zero_is_a_return_time() {
        let t = ShiftOperator::rolewicz(2.0, SpaceSpec::l2()).unwrap();
        let c = SparseVec::from_entries(SpaceSpec::l2(), [(0, 1.0), (3, -0.5)]).unwrap();
        let b = Ball::new(c, 0.1).unwrap();
        let r = return_set(&t, &b, &b, 200, 4).unwrap();
        assert_eq!(r.members.first(), Some(&0));
    }

    #[test]
    fn rolewicz_returns_are_cofinite() {
        let s = SpaceSpec::l2();
        let t = ShiftOperator::rolewicz(2.0, s).unwrap();
        let u = Ball::new(SparseVec::basis(s, 0).unwrap(), 0.25).unwrap();
        let v = Ball::new(SparseVec::basis(s, 1).unwrap().scale(-3.0), 0.25).unwrap();
        let r = return_set(&t, &u, &v, 1000, 8).unwrap();
        // ‖S^n(c_V - B^n c_U)‖ = 3·2^{-n} (n >= 1) drops below 1/4 at n = 4
        assert_eq!(r.members[0], 4);
        assert_eq!(r.members.len(), 997);
        assert!(r.syndetic_subset_found());
        assert!(r.label().contains("under-approximation"));
    }

    #[test]
    fn unit_weights_never_return() {
        let s = SpaceSpec::l2();
        let t = ShiftOperator::rolewicz(1.0, s).unwrap();
        let u = Ball::new(SparseVec::basis(s, 0).unwrap(), 0.25).unwrap();
        let v = Ball::new(SparseVec::basis(s, 0).unwrap().scale(3.0), 0.25).unwrap();
        let r = return_set(&t, &u, &v, 300, 8).unwrap();
        assert!(r.members.is_empty());
        assert!(!r.syndetic_subset_found());
    }

    #[test]
    fn inclusion_samples() {
        let members: Vec<u64> = (2..100).collect();
        assert!(difference_inclusion_failures(&[0, 5, 9], 2, &members, 10).is_empty());
        assert_eq!(difference_inclusion_failures(&[0, 5], 0, &[1, 2, 3], 10), Vec::<u64>::new());
        assert_eq!(difference_inclusion_failures(&[0, 2], 0, &[1, 3], 10), vec![2]);
    }
}
