//! Subsets of the non-negative integers and their densities.
//!
//! Every set answers exact membership for arbitrarily large indices. Sets
//! with structure (periodic, block unions, the `c_0` counterexample sets)
//! answer window counts and enumerations without scanning from zero, so
//! they remain usable near indices such as `10^102`.

mod density;
mod family;
pub mod huge;
mod prescribed;
mod sets;
mod spec;
mod syndetic;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

pub use density::to_f64;
pub(crate) use sets::nth_prime;
pub use density::{
    estimate_densities, estimate_densities_with, estimate_from_members, DensityOptions,
    DensityReport, WindowExtremes,
};
pub use family::{check_gap_family, check_gap_points, GapVerdict, GapViolation, SetFamily};
pub use huge::{Distance, HugeIndex};
pub use prescribed::{make_prescribed_density_set, PrescribedDensitySet};
pub use sets::{
    ExplicitSet, FactorialBlocks, IntervalUnion, PeriodicSet, PowerSet, PrimePowerSet, SquareSet,
};
pub use spec::SetSpec;
pub use syndetic::{differences, difference_set, is_syndetic, syndetic_from_members, SyndeticEvidence};

/// Kind tag carried by every set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SetKind {
    ExplicitList,
    Periodic,
    IntervalUnion,
    BlockFamily,
    Derived,
}

impl SetKind {
    pub fn tag(self) -> &'static str {
        match self {
            SetKind::ExplicitList => "explicit-list",
            SetKind::Periodic => "periodic",
            SetKind::IntervalUnion => "interval-union",
            SetKind::BlockFamily => "block-family",
            SetKind::Derived => "derived",
        }
    }
}

impl fmt::Display for SetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A subset of `Z_+` given by an exact membership predicate.
///
/// Implementations must keep `enumerate`, `members_u64`, `count_window` and
/// `contains` in agreement. The provided defaults derive everything from
/// `contains` by scanning, which is only suitable for small windows.
pub trait IndexSet: Send + Sync + fmt::Debug {
    fn kind(&self) -> SetKind;

    fn contains(&self, n: &BigUint) -> bool;

    fn contains_u64(&self, n: u64) -> bool {
        self.contains(&BigUint::from(n))
    }

    /// Members of `[a, b]` in increasing order.
    fn enumerate(&self, a: &BigUint, b: &BigUint) -> Vec<BigUint> {
        let mut out = Vec::new();
        let mut n = a.clone();
        while &n <= b {
            if self.contains(&n) {
                out.push(n.clone());
            }
            n += 1u32;
        }
        out
    }

    /// Members of `[a, b]` in increasing order, for machine-sized windows.
    fn members_u64(&self, a: u64, b: u64) -> Vec<u64> {
        if a > b {
            return Vec::new();
        }
        (a..=b).filter(|&n| self.contains_u64(n)).collect()
    }

    /// `|A ∩ [a, b]|`.
    fn count_window(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a > b {
            return BigUint::zero();
        }
        match (a.to_u64(), b.to_u64()) {
            (Some(a), Some(b)) => BigUint::from(self.members_u64(a, b).len()),
            _ => BigUint::from(self.enumerate(a, b).len()),
        }
    }

    /// Structural positions (block starts and similar) up to `horizon`.
    fn anchors(&self, _horizon: u64) -> Vec<u64> {
        Vec::new()
    }

    /// Serializable description, when the set has one.
    fn spec(&self) -> Option<SetSpec> {
        None
    }
}

pub type SharedSet = Arc<dyn IndexSet>;

/// `|A ∩ [a, b]|`; an empty range counts zero.
pub fn count_window(set: &dyn IndexSet, a: &BigUint, b: &BigUint) -> BigUint {
    set.count_window(a, b)
}

/// Sorted members of `[0, horizon]`.
pub fn members_up_to(set: &dyn IndexSet, horizon: u64) -> Vec<u64> {
    set.members_u64(0, horizon)
}

pub(crate) fn big(n: u64) -> BigUint {
    BigUint::from(n)
}
