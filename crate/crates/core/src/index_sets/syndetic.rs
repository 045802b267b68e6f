use std::fmt;

use super::{ExplicitSet, IndexSet};
use crate::error::{Error, Result};

/// Finite-horizon evidence about bounded gaps.
///
/// Gaps are differences between consecutive members in `[0, H]`, plus the
/// trailing gap `H - last + 1` (the next member, if any, lies past `H`).
/// The verdict is positive when the gaps in the second half of the range
/// do not exceed those of the first half and the trailing gap stays within
/// the same bound. This is evidence at the horizon only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyndeticEvidence {
    pub verdict: bool,
    /// Largest gap between consecutive members in `[0, H]`.
    pub gap_bound: u64,
    /// Largest gap including the trailing one, with the member it starts at.
    pub largest_gap: u64,
    pub largest_gap_at: u64,
    pub members: usize,
    pub horizon: u64,
}

impl SyndeticEvidence {
    pub fn label(&self) -> String {
        format!("evidence at horizon {}", self.horizon)
    }
}

impl fmt::Display for SyndeticEvidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.verdict {
            write!(f, "syndetic, gap bound {} ({})", self.gap_bound, self.label())
        } else {
            write!(
                f,
                "not syndetic, largest gap {} after {} ({})",
                self.largest_gap,
                self.largest_gap_at,
                self.label()
            )
        }
    }
}

pub fn is_syndetic(set: &dyn IndexSet, horizon: u64) -> Result<SyndeticEvidence> {
    syndetic_from_members(&set.members_u64(0, horizon), horizon)
}

/// Same as [`is_syndetic`] on the sorted members of `A ∩ [0, horizon]`.
pub fn syndetic_from_members(members: &[u64], horizon: u64) -> Result<SyndeticEvidence> {
    let members: Vec<u64> = members.iter().copied().filter(|&m| m <= horizon).collect();
    let (&first, &last) = match (members.first(), members.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::NoData { horizon }),
    };
    let mid = first + (last - first) / 2;
    let mut first_half = 0u64;
    let mut second_half = 0u64;
    let mut gap_bound = 0u64;
    let mut largest = (0u64, first);
    for pair in members.windows(2) {
        let gap = pair[1] - pair[0];
        if pair[0] < mid {
            first_half = first_half.max(gap);
        } else {
            second_half = second_half.max(gap);
        }
        if gap > gap_bound {
            gap_bound = gap;
        }
        if gap > largest.0 {
            largest = (gap, pair[0]);
        }
    }
    let trailing = horizon - last + 1;
    if trailing > largest.0 {
        largest = (trailing, last);
    }
    let verdict = members.len() >= 3 && second_half <= first_half && trailing <= first_half;
    Ok(SyndeticEvidence {
        verdict,
        gap_bound,
        largest_gap: largest.0,
        largest_gap_at: largest.1,
        members: members.len(),
        horizon,
    })
}

/// `{a - a' : a, a' ∈ A ∩ [0, horizon], a >= a'}` as an explicit list.
pub fn difference_set(set: &dyn IndexSet, horizon: u64) -> ExplicitSet {
    ExplicitSet::from_u64(differences(&set.members_u64(0, horizon), horizon))
}

/// Sorted differences of sorted members, all lying in `[0, horizon]`.
pub fn differences(members: &[u64], horizon: u64) -> Vec<u64> {
    let bits = horizon as usize + 1;
    let words = bits.div_ceil(64);
    let mut set = vec![0u64; words];
    for &m in members.iter().filter(|&&m| m <= horizon) {
        set[(m / 64) as usize] |= 1 << (m % 64);
    }
    let mut out = vec![0u64; words];
    for &shift in members.iter().filter(|&&m| m <= horizon) {
        // out |= set >> shift
        let ws = (shift / 64) as usize;
        let bs = shift % 64;
        for i in 0..words - ws {
            let lo = set[i + ws] >> bs;
            let hi = if bs > 0 && i + ws + 1 < words {
                set[i + ws + 1] << (64 - bs)
            } else {
                0
            };
            out[i] |= lo | hi;
        }
    }
    let mut diffs = Vec::new();
    for (i, &w) in out.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            let b = w.trailing_zeros() as u64;
            diffs.push(i as u64 * 64 + b);
            w &= w - 1;
        }
    }
    diffs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index_sets::{PeriodicSet, SquareSet};

    #[test]
    fn evens_gap_two() {
        let e = is_syndetic(&PeriodicSet::evens(), 1000).unwrap();
        assert!(e.verdict);
        assert_eq!(e.gap_bound, 2);
    }

    #[test]
    fn squares_not_syndetic() {
        let e = is_syndetic(&SquareSet, 10_000).unwrap();
        assert!(!e.verdict);
        assert_eq!(e.largest_gap, 199);
        assert_eq!(e.largest_gap_at, 99 * 99);
    }

    #[test]
    fn empty_is_no_data() {
        let e = is_syndetic(&ExplicitSet::from_u64([50]), 10).unwrap_err();
        assert_eq!(e, Error::NoData { horizon: 10 });
    }

    #[test]
    fn small_difference_sets() {
        let d = difference_set(&ExplicitSet::from_u64([0, 3, 6]), 10);
        assert_eq!(d.to_u64_vec(), vec![0, 3, 6]);
        let d = difference_set(&ExplicitSet::from_u64([1, 4]), 10);
        assert_eq!(d.to_u64_vec(), vec![0, 3]);
    }

    #[test]
    fn differences_match_pairs() {
        let m: Vec<u64> = vec![0, 1, 5, 63, 64, 65, 130, 200];
        let mut brute: Vec<u64> = m
            .iter()
            .flat_map(|&a| m.iter().filter(move |&&b| b <= a).map(move |&b| a - b))
            .collect();
        brute.sort_unstable();
        brute.dedup();
        assert_eq!(differences(&m, 200), brute);
    }
}
