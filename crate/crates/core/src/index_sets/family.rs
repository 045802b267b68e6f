use std::fmt;

use num_bigint::BigUint;

use super::{Distance, HugeIndex, SharedSet};
use crate::error::{Error, Result};

/// Indexed sets `k ↦ A_k`, `k = 1, 2, ...`.
#[derive(Clone, Debug)]
pub struct SetFamily {
    pub label: String,
    sets: Vec<SharedSet>,
}

impl SetFamily {
    pub fn new(label: impl Into<String>, sets: Vec<SharedSet>) -> Self {
        SetFamily {
            label: label.into(),
            sets,
        }
    }

    /// Number of defined levels.
    pub fn levels(&self) -> usize {
        self.sets.len()
    }

    /// `A_k` for `1 <= k <= levels()`.
    pub fn level(&self, k: usize) -> Option<&SharedSet> {
        k.checked_sub(1).and_then(|i| self.sets.get(i))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapViolation {
    pub level_a: usize,
    pub index_a: HugeIndex,
    pub level_b: usize,
    pub index_b: HugeIndex,
    pub distance: BigUint,
}

impl fmt::Display for GapViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ∈ A_{} and {} ∈ A_{} are {} apart, need {}",
            self.index_a,
            self.level_a,
            self.index_b,
            self.level_b,
            self.distance,
            self.level_a.max(self.level_b)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapVerdict {
    pub holds: bool,
    pub first_violation: Option<GapViolation>,
    /// Pairs whose distance had to be examined.
    pub pairs_checked: u64,
    pub points: usize,
}

impl GapVerdict {
    pub fn into_result(self) -> Result<Self> {
        match &self.first_violation {
            Some(v) => Err(Error::GapViolation(v.to_string())),
            None => Ok(self),
        }
    }
}

/// Checks `|j' - j| >= max(k, k')` for all distinct points `(k, j)`,
/// `(k', j')`; a repeated index is a violation.
///
/// Points are sorted internally. Only neighbours closer than the largest
/// level can violate the condition, so the scan stops early.
pub fn check_gap_points(points: &[(usize, HugeIndex)]) -> GapVerdict {
    let mut pts: Vec<&(usize, HugeIndex)> = points.iter().collect();
    pts.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    let max_level = pts.iter().map(|p| p.0).max().unwrap_or(0);
    let reach = BigUint::from(max_level);
    let mut checked = 0u64;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let d = a.1.distance(&b.1);
            checked += 1;
            if d.at_least(&reach) && !d.is_zero() {
                break;
            }
            let need = BigUint::from(a.0.max(b.0));
            if !d.at_least(&need) || d.is_zero() {
                let distance = match d {
                    Distance::Exact(x) | Distance::AtLeast(x) => x,
                };
                return GapVerdict {
                    holds: false,
                    first_violation: Some(GapViolation {
                        level_a: a.0,
                        index_a: a.1.clone(),
                        level_b: b.0,
                        index_b: b.1.clone(),
                        distance,
                    }),
                    pairs_checked: checked,
                    points: pts.len(),
                };
            }
        }
    }
    GapVerdict {
        holds: true,
        first_violation: None,
        pairs_checked: checked,
        points: pts.len(),
    }
}

/// Gap condition for `A_1, ..., A_{k_max}` restricted to `[0, horizon]`.
pub fn check_gap_family(family: &SetFamily, k_max: usize, horizon: u64) -> Result<GapVerdict> {
    if k_max > family.levels() {
        return Err(Error::InvalidArgument(format!(
            "family {} defines {} levels, {} requested",
            family.label,
            family.levels(),
            k_max
        )));
    }
    let mut points = Vec::new();
    for k in 1..=k_max {
        let set = family.level(k).expect("checked above");
        points.extend(
            set.members_u64(0, horizon)
                .into_iter()
                .map(|m| (k, HugeIndex::from_u64(m))),
        );
    }
    Ok(check_gap_points(&points))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::index_sets::{PeriodicSet, SharedSet};

    #[test]
    fn single_level_integers() {
        let all: SharedSet = Arc::new(PeriodicSet::new(1, &[0], 0).unwrap());
        let fam = SetFamily::new("Z+", vec![all]);
        assert!(check_gap_family(&fam, 1, 1000).unwrap().holds);
    }

    #[test]
    fn overlapping_levels_fail() {
        let a1: SharedSet = Arc::new(PeriodicSet::new(100, &[0], 100).unwrap());
        let a2: SharedSet = Arc::new(PeriodicSet::new(10_000, &[0], 10_000).unwrap());
        let fam = SetFamily::new("m·10^2k", vec![a1, a2]);
        let v = check_gap_family(&fam, 2, 100_000).unwrap();
        assert!(!v.holds);
        let w = v.first_violation.unwrap();
        assert_eq!(w.index_a, HugeIndex::from_u64(10_000));
        assert_eq!(w.distance, BigUint::from(0u32));
    }

    #[test]
    fn close_points_fail() {
        let pts = vec![(3, HugeIndex::from_u64(10)), (1, HugeIndex::from_u64(12))];
        let v = check_gap_points(&pts);
        assert!(!v.holds);
        let pts = vec![(3, HugeIndex::from_u64(10)), (1, HugeIndex::from_u64(13))];
        assert!(check_gap_points(&pts).holds);
    }
}
