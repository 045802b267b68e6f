//! Finite-horizon evidence for `Σ_n 1/|w_1···w_n|^p < ∞` and for
//! `|w_1···w_n| → ∞`.

use std::fmt;

use super::WeightSequence;
use crate::error::{Error, Result};

/// Ratio of the last two dyadic block sums below which a series counts
/// as converging.
pub const CONVERGENCE_RATIO: f64 = 0.75;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesEvidence {
    Converging,
    Diverging,
}

impl fmt::Display for SeriesEvidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesEvidence::Converging => "converging",
            SeriesEvidence::Diverging => "diverging",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesReport {
    pub p: f64,
    pub horizon: u64,
    pub partial_sum: f64,
    /// Sums over `[2^i, 2^{i+1})` for the last two complete blocks.
    pub previous_block: f64,
    pub last_block: f64,
    pub evidence: SeriesEvidence,
}

impl SeriesReport {
    pub fn label(&self) -> String {
        format!("{} (evidence at horizon {})", self.evidence, self.horizon)
    }
}

/// Partial sum of `Σ_{n=1}^{H} 2^{-p L(n)}` with a dyadic block-ratio
/// verdict.
pub fn frequent_hc_series_test(w: &WeightSequence, p: f64, horizon: u64) -> Result<SeriesReport> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("p must be >= 1, got {p}")));
    }
    if horizon < 4 {
        return Err(Error::InvalidArgument("horizon must be at least 4".into()));
    }
    let logs = w.log2_products_to(horizon);
    let mut partial_sum = 0.0;
    let mut blocks: Vec<f64> = Vec::new();
    let mut block = 0.0;
    let mut block_end = 2u64;
    for n in 1..=horizon {
        let t = (-p * logs[n as usize]).exp2();
        partial_sum += t;
        block += t;
        if n + 1 == block_end {
            blocks.push(block);
            block = 0.0;
            block_end *= 2;
        }
    }
    let last_block = blocks[blocks.len() - 1];
    let previous_block = blocks[blocks.len() - 2];
    let converging = if previous_block == 0.0 {
        last_block == 0.0
    } else {
        last_block < CONVERGENCE_RATIO * previous_block
    };
    Ok(SeriesReport {
        p,
        horizon,
        partial_sum,
        previous_block,
        last_block,
        evidence: if converging {
            SeriesEvidence::Converging
        } else {
            SeriesEvidence::Diverging
        },
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MixingReport {
    pub horizon: u64,
    /// `min L(n)` over each dyadic block `[2^i, 2^{i+1})` within the horizon.
    pub block_minima: Vec<f64>,
    pub threshold_log2: f64,
    pub tends_to_infinity: bool,
}

impl MixingReport {
    pub fn label(&self) -> String {
        let v = if self.tends_to_infinity {
            "product tends to infinity"
        } else {
            "product does not tend to infinity"
        };
        format!("{v} (evidence at horizon {})", self.horizon)
    }
}

/// Default threshold on `log2 |w_1···w_n|` for the last block.
pub const MIXING_THRESHOLD_LOG2: f64 = 3.0;

pub fn mixing_test(w: &WeightSequence, horizon: u64) -> Result<MixingReport> {
    mixing_test_with(w, horizon, MIXING_THRESHOLD_LOG2)
}

/// Positive evidence when the block minima of `L(n)` never decrease and
/// the last one reaches `threshold_log2`.
pub fn mixing_test_with(w: &WeightSequence, horizon: u64, threshold_log2: f64) -> Result<MixingReport> {
    if horizon < 4 {
        return Err(Error::InvalidArgument("horizon must be at least 4".into()));
    }
    let logs = w.log2_products_to(horizon);
    let mut block_minima = Vec::new();
    let mut lo = 1u64;
    while lo <= horizon {
        let hi = (2 * lo - 1).min(horizon);
        let m = (lo..=hi)
            .map(|n| logs[n as usize])
            .fold(f64::INFINITY, f64::min);
        block_minima.push(m);
        lo *= 2;
    }
    let monotone = block_minima.windows(2).all(|p| p[1] >= p[0]);
    let last = *block_minima.last().expect("horizon >= 1");
    Ok(MixingReport {
        horizon,
        block_minima,
        threshold_log2,
        tends_to_infinity: monotone && last >= threshold_log2,
    })
}
