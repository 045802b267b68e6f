use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hc_constructor::HCVector;
use crate::index_sets::{estimate_from_members, DensityOptions, DensityReport};
use crate::sequence_spaces::{ball_contains, SparseVec};
use crate::weighted_shifts::ShiftOperator;

/// Entries above this stop the orbit.
pub const DEFAULT_OVERFLOW_CAP: f64 = 1e300;

/// Open ball `{v : ‖v - center‖ < radius}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub center: SparseVec,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: SparseVec, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
        }
        Ok(Ball { center, radius })
    }

    pub fn contains(&self, v: &SparseVec) -> Result<bool> {
        ball_contains(&self.center, self.radius, v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HittingReport {
    pub target_id: usize,
    pub target: Ball,
    /// `N(x, V) ∩ [0, horizon]`, increasing.
    pub times: Vec<u64>,
    pub horizon: u64,
    pub densities: DensityReport,
    /// First step whose orbit point was not computed, if the orbit stopped.
    pub truncated_at: Option<u64>,
    pub warnings: Vec<String>,
}

impl HittingReport {
    /// A report for a given time set, for classification of arbitrary sets.
    pub fn from_times(target_id: usize, target: Ball, times: Vec<u64>, horizon: u64, window: u64) -> Result<Self> {
        let densities = estimate_from_members(&times, horizon, &[window], &DensityOptions::default())?;
        Ok(HittingReport {
            target_id,
            target,
            times,
            horizon,
            densities,
            truncated_at: None,
            warnings: Vec::new(),
        })
    }
}

/// Window length for the Banach estimates of hitting sets.
pub fn default_window(horizon: u64) -> u64 {
    (horizon / 100).clamp(1, 1000)
}

fn reports_from_hits(
    targets: &[Ball],
    hits: Vec<Vec<u64>>,
    horizon: u64,
    truncated_at: Option<u64>,
    warnings: Vec<String>,
) -> Result<Vec<HittingReport>> {
    let window = default_window(horizon);
    targets
        .iter()
        .zip(hits)
        .enumerate()
        .map(|(id, (ball, times))| {
            let mut r = HittingReport::from_times(id, ball.clone(), times, horizon, window)?;
            r.truncated_at = truncated_at;
            r.warnings = warnings.clone();
            Ok(r)
        })
        .collect()
}

fn check_inputs(targets: &[Ball], horizon: u64) -> Result<()> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be >= 1".into()));
    }
    if targets.is_empty() {
        return Err(Error::InvalidArgument("no targets".into()));
    }
    Ok(())
}

/// `N(x, V) ∩ [0, horizon]` for each target, stepping `B` once per `n`.
pub fn hitting_times(t: &ShiftOperator, x: &SparseVec, targets: &[Ball], horizon: u64) -> Result<Vec<HittingReport>> {
    hitting_times_capped(t, x, targets, horizon, DEFAULT_OVERFLOW_CAP)
}

pub fn hitting_times_capped(
    t: &ShiftOperator,
    x: &SparseVec,
    targets: &[Ball],
    horizon: u64,
    cap: f64,
) -> Result<Vec<HittingReport>> {
    check_inputs(targets, horizon)?;
    let mut hits = vec![Vec::new(); targets.len()];
    let mut point = x.clone();
    let mut truncated_at = None;
    let mut warnings = Vec::new();
    for n in 0..=horizon {
        if n > 0 {
            point = t.apply_backward(&point, 1)?;
        }
        if point.iter().any(|(_, v)| !(v.abs() <= cap)) {
            truncated_at = Some(n);
            warnings.push(format!(
                "orbit entry exceeded {cap:e} at n = {n}; times beyond n = {} are not computed",
                n - 1
            ));
            break;
        }
        for (h, ball) in hits.iter_mut().zip(targets) {
            if ball.contains(&point)? {
                h.push(n);
            }
        }
    }
    reports_from_hits(targets, hits, horizon, truncated_at, warnings)
}

/// Hitting times for a constructed vector, whose orbit points are
/// evaluated term by term instead of by repeated stepping.
pub fn hitting_times_constructed(
    t: &ShiftOperator,
    v: &HCVector,
    targets: &[Ball],
    horizon: u64,
) -> Result<Vec<HittingReport>> {
    check_inputs(targets, horizon)?;
    let residual = v.residual(t)?;
    let inside: Vec<Vec<bool>> = (0..=horizon)
        .into_par_iter()
        .map(|n| -> Result<Vec<bool>> {
            let p = v.orbit_point(t, &residual, n)?;
            targets.iter().map(|b| b.contains(&p)).collect()
        })
        .collect::<Result<_>>()?;
    let hits = (0..targets.len())
        .map(|i| {
            (0..=horizon)
                .filter(|&n| inside[n as usize][i])
                .collect()
        })
        .collect();
    let mut warnings = Vec::new();
    if horizon > v.truncation {
        warnings.push(format!(
            "orbit points beyond the truncation {} omit later terms",
            v.truncation
        ));
    }
    reports_from_hits(targets, hits, horizon, None, warnings)
}

/// Labels from strongest to weakest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Evidence {
    Frequent,
    UpperFrequent,
    Reiterative,
    NoEvidence,
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Evidence::Frequent => "frequent",
            Evidence::UpperFrequent => "U-frequent",
            Evidence::Reiterative => "reiterative",
            Evidence::NoEvidence => "no hypercyclicity evidence",
        })
    }
}

/// Default threshold on the density estimates.
pub const DEFAULT_THETA: f64 = 0.01;

#[derive(Clone, Debug, PartialEq)]
pub struct TargetClass {
    pub target_id: usize,
    pub evidence: Evidence,
    /// `B_d, d_, d̄, B̄d`.
    pub densities: [f64; 4],
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub theta: f64,
    pub horizon: u64,
    pub per_target: Vec<TargetClass>,
    /// Weakest label over the targets.
    pub overall: Evidence,
}

impl Classification {
    pub fn label(&self) -> String {
        format!(
            "{} (evidence at horizon {}, theta {})",
            self.overall, self.horizon, self.theta
        )
    }
}

pub fn classify(reports: &[HittingReport]) -> Result<Classification> {
    classify_with(reports, DEFAULT_THETA)
}

/// Frequent if `d_ > θ`, else U-frequent if `d̄ > θ`, else reiterative if
/// `B̄d > θ`.
pub fn classify_with(reports: &[HittingReport], theta: f64) -> Result<Classification> {
    if reports.is_empty() {
        return Err(Error::InvalidArgument("no reports to classify".into()));
    }
    let per_target: Vec<TargetClass> = reports
        .iter()
        .map(|r| {
            let d = r.densities.as_f64();
            let evidence = if d[1] > theta {
                Evidence::Frequent
            } else if d[2] > theta {
                Evidence::UpperFrequent
            } else if d[3] > theta {
                Evidence::Reiterative
            } else {
                Evidence::NoEvidence
            };
            TargetClass {
                target_id: r.target_id,
                evidence,
                densities: d,
            }
        })
        .collect();
    let overall = per_target.iter().map(|c| c.evidence).max().expect("non-empty");
    Ok(Classification {
        theta,
        horizon: reports.iter().map(|r| r.horizon).min().expect("non-empty"),
        per_target,
        overall,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index_sets::{FactorialBlocks, IndexSet};
    use crate::sequence_spaces::SpaceSpec;

    fn e(k: i64) -> SparseVec {
        SparseVec::basis(SpaceSpec::l2(), k).unwrap()
    }

    #[test]
    fn collapsing_orbit() {
        let t = ShiftOperator::rolewicz(2.0, SpaceSpec::l2()).unwrap();
        let zero = SparseVec::zero(SpaceSpec::l2());
        let balls = [Ball::new(zero.clone(), 0.5).unwrap(), Ball::new(e(0), 0.5).unwrap()];
        let r = hitting_times(&t, &e(0), &balls, 50).unwrap();
        assert_eq!(r[0].times, (1..=50).collect::<Vec<_>>());
        assert_eq!(r[1].times, vec![0]);
        let r = hitting_times(&t, &zero, &balls[..1], 50).unwrap();
        assert_eq!(r[0].times, (0..=50).collect::<Vec<_>>());
    }

    #[test]
    fn overflow_truncates() {
        let t = ShiftOperator::rolewicz(2.0, SpaceSpec::l2()).unwrap();
        let x = e(5000);
        let balls = [Ball::new(SparseVec::zero(SpaceSpec::l2()), 1.0).unwrap()];
        let r = hitting_times(&t, &x, &balls, 2000).unwrap();
        assert_eq!(r[0].truncated_at, Some(997));
        assert_eq!(r[0].warnings.len(), 1);
        assert!(r[0].times.is_empty());
    }

    #[test]
    fn classification_labels() {
        let ball = Ball::new(e(0), 1.0).unwrap();
        let h = 1_000_000;
        let all = HittingReport::from_times(0, ball.clone(), (0..=h).collect(), h, 10).unwrap();
        let c = classify(std::slice::from_ref(&all)).unwrap();
        assert_eq!(c.overall, Evidence::Frequent);
        let blocks = FactorialBlocks.members_u64(0, h);
        let fb = HittingReport::from_times(1, ball.clone(), blocks, h, 10).unwrap();
        assert_eq!(classify(std::slice::from_ref(&fb)).unwrap().overall, Evidence::Reiterative);
        let empty = HittingReport::from_times(2, ball, vec![], h, 10).unwrap();
        let c = classify(&[all, fb, empty]).unwrap();
        assert_eq!(c.overall, Evidence::NoEvidence);
        assert_eq!(c.per_target[1].evidence, Evidence::Reiterative);
        assert!(c.label().contains("evidence at horizon"));
    }
}
