//! Recurrence properties of weighted backward shifts: densities of integer
//! sets, shifts on truncated sequence spaces, constructive hypercyclic
//! vectors and an exact check of a reiterative counterexample on `c_0`.

pub mod counterexample_c0;
pub mod error;
pub mod hc_constructor;
pub mod index_sets;
pub mod recurrence_analysis;
pub mod sequence_spaces;
pub mod weighted_shifts;

pub use error::{Error, Result};
