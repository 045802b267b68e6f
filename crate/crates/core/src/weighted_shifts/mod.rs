//! Weighted backward shifts `B_w`, their right inverses `S` and the series
//! criteria on the weights.

mod operator;
mod series;
mod weights;

pub use operator::{log2_norm_from_log2s, ShiftOperator};
pub use series::{
    frequent_hc_series_test, mixing_test, mixing_test_with, MixingReport, SeriesEvidence,
    SeriesReport, CONVERGENCE_RATIO, MIXING_THRESHOLD_LOG2,
};
pub use weights::{WeightKind, WeightSequence, WeightSpec};
