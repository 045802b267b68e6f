//! Explicit vectors whose orbit under a weighted shift returns close to
//! each `y_l` along a prescribed set `A_{k_l}`.
//!
//! A plan selects levels from a gap-separated family and certifies the
//! four estimates used in the assembly. The vector is kept as its list of
//! terms so that orbit points far beyond the `f64` range of `x` itself can
//! still be evaluated exactly.

mod dense;
mod families;
mod plan;
mod vector;

pub use dense::DenseSequence;
pub use families::{
    dyadic_block_family, dyadic_block_period, family_by_name, prime_power_family, DEFAULT_LEVELS,
};
pub use plan::{select_subsequence, Certificate, Condition, ConstructionPlan};
pub use vector::{
    assemble_vector, orbit_bound, verify_orbit_bounds, HCVector, OrbitLevel, OrbitReport,
};
