//! Hitting sets of orbits, return sets, and the correlation estimates
//! behind the equivalence of reiterative and frequent hypercyclicity for
//! weighted shifts on `ℓ^p`.

mod beta;
mod correlation;
mod hitting;
mod returns;

pub use beta::{beta_sequence, eqbeta_sums, AlphaKind, AlphaProfile, BetaReport, EqBetaSums};
pub use correlation::{banach_anchor_windows, correlation_scan, CorrelationReport};
pub use hitting::{
    classify, classify_with, default_window, hitting_times, hitting_times_capped,
    hitting_times_constructed, Ball, Classification, Evidence, HittingReport, TargetClass,
    DEFAULT_OVERFLOW_CAP, DEFAULT_THETA,
};
pub use returns::{difference_inclusion_failures, return_set, ReturnSetReport};
