//! Finite-horizon estimates of the four densities.
//!
//! For a horizon `H` and window length `s`:
//!
//! * upper/lower Banach: max/min of `|A ∩ [k, k+s-1]| / s` over every
//!   window position `0 <= k <= H-s+1`;
//! * upper/lower density: max/min of `|A ∩ [0, n)| / n` over prefix lengths
//!   `n` that are multiples of `s` and lie in the tail `[H/tail, H+1]`.
//!
//! A prefix whose length is a multiple of `s` splits into aligned windows
//! of length `s`, so its ratio lies between the window extremes. This makes
//! `lower_banach <= lower_density <= upper_density <= upper_banach` hold
//! exactly for every report.

use num_rational::Ratio;
use rayon::prelude::*;

use super::IndexSet;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityOptions {
    /// Prefix ratios are taken over lengths `n >= (H+1) / tail_divisor`.
    pub tail_divisor: u64,
}

impl Default for DensityOptions {
    fn default() -> Self {
        DensityOptions { tail_divisor: 100 }
    }
}

/// Window-count extremes for one window length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowExtremes {
    pub s: u64,
    pub max_count: u64,
    pub max_at: u64,
    pub min_count: u64,
    pub min_at: u64,
}

impl WindowExtremes {
    pub fn max_ratio(&self) -> Ratio<u64> {
        Ratio::new(self.max_count, self.s)
    }

    pub fn min_ratio(&self) -> Ratio<u64> {
        Ratio::new(self.min_count, self.s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub lower_density: Ratio<u64>,
    pub upper_density: Ratio<u64>,
    pub lower_banach: Ratio<u64>,
    pub upper_banach: Ratio<u64>,
    pub horizon: u64,
    pub window_grid: Vec<u64>,
    /// Window length the Banach estimates and prefix grid refer to.
    pub window: u64,
    pub tail_start: u64,
    /// Prefix lengths achieving the density extremes.
    pub lower_density_at: u64,
    pub upper_density_at: u64,
    /// Window starts achieving the Banach extremes.
    pub lower_banach_at: u64,
    pub upper_banach_at: u64,
    pub per_window: Vec<WindowExtremes>,
    /// Structural positions reported by the set (block starts etc.).
    pub anchors: Vec<u64>,
}

impl DensityReport {
    pub fn chain_holds(&self) -> bool {
        self.lower_banach <= self.lower_density
            && self.lower_density <= self.upper_density
            && self.upper_density <= self.upper_banach
    }

    pub fn as_f64(&self) -> [f64; 4] {
        [
            to_f64(self.lower_banach),
            to_f64(self.lower_density),
            to_f64(self.upper_density),
            to_f64(self.upper_banach),
        ]
    }
}

/// Nearest `f64` to an exact ratio.
pub fn to_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn estimate_densities(
    set: &dyn IndexSet,
    horizon: u64,
    window_grid: &[u64],
) -> Result<DensityReport> {
    estimate_densities_with(set, horizon, window_grid, &DensityOptions::default())
}

pub fn estimate_densities_with(
    set: &dyn IndexSet,
    horizon: u64,
    window_grid: &[u64],
    options: &DensityOptions,
) -> Result<DensityReport> {
    validate(horizon, window_grid)?;
    let members = set.members_u64(0, horizon);
    let mut report = estimate_from_members(&members, horizon, window_grid, options)?;
    report.anchors = set.anchors(horizon);
    Ok(report)
}

fn validate(horizon: u64, window_grid: &[u64]) -> Result<()> {
    let largest = window_grid
        .iter()
        .copied()
        .max()
        .ok_or_else(|| Error::InvalidArgument("window grid is empty".into()))?;
    if window_grid.contains(&0) {
        return Err(Error::InvalidArgument("window lengths must be >= 1".into()));
    }
    if horizon < largest {
        return Err(Error::HorizonTooSmall {
            horizon,
            window: largest,
        });
    }
    Ok(())
}

/// Density estimates from the sorted members of `A ∩ [0, horizon]`.
pub fn estimate_from_members(
    members: &[u64],
    horizon: u64,
    window_grid: &[u64],
    options: &DensityOptions,
) -> Result<DensityReport> {
    validate(horizon, window_grid)?;
    let len = usize::try_from(horizon + 1).map_err(|_| {
        Error::InvalidArgument(format!("horizon {horizon} too large to scan"))
    })?;
    // prefix[i] = |A ∩ [0, i)|
    let mut prefix = vec![0u32; len + 1];
    let mut it = members.iter().copied().filter(|&m| m <= horizon).peekable();
    for i in 0..len {
        let hit = it.next_if(|&m| m == i as u64).is_some();
        prefix[i + 1] = prefix[i] + u32::from(hit);
    }

    let mut grid: Vec<u64> = window_grid.to_vec();
    grid.sort_unstable();
    grid.dedup();

    let per_window: Vec<WindowExtremes> = grid
        .par_iter()
        .map(|&s| window_extremes(&prefix, s))
        .collect();
    let window = *grid.last().expect("validated non-empty");
    let top = per_window.last().expect("non-empty").clone();

    let tail_start = (horizon + 1) / options.tail_divisor.max(1);
    let last_multiple = (horizon + 1) / window * window;
    let first_multiple = tail_start.div_ceil(window).max(1) * window;
    let first_multiple = first_multiple.min(last_multiple);

    let mut upper = (0u64, 1u64, 0u64);
    let mut lower = (u64::MAX, 1u64, 0u64);
    let mut n = first_multiple;
    while n <= last_multiple {
        let c = u64::from(prefix[n as usize]);
        let r = Ratio::new(c, n);
        if upper.2 == 0 || r > Ratio::new(upper.0, upper.1) {
            upper = (c, n, n);
        }
        if lower.2 == 0 || r < Ratio::new(lower.0, lower.1) {
            lower = (c, n, n);
        }
        n += window;
    }

    let report = DensityReport {
        lower_density: Ratio::new(lower.0, lower.1),
        upper_density: Ratio::new(upper.0, upper.1),
        lower_banach: top.min_ratio(),
        upper_banach: top.max_ratio(),
        horizon,
        window_grid: grid,
        window,
        tail_start,
        lower_density_at: lower.2,
        upper_density_at: upper.2,
        lower_banach_at: top.min_at,
        upper_banach_at: top.max_at,
        per_window,
        anchors: Vec::new(),
    };
    debug_assert!(report.chain_holds());
    Ok(report)
}

fn window_extremes(prefix: &[u32], s: u64) -> WindowExtremes {
    let s_us = s as usize;
    let positions = prefix.len() - s_us; // windows [k, k+s-1] with k+s <= H+1
    let mut ext = WindowExtremes {
        s,
        max_count: 0,
        max_at: 0,
        min_count: u64::MAX,
        min_at: 0,
    };
    for k in 0..positions {
        let c = u64::from(prefix[k + s_us] - prefix[k]);
        if c > ext.max_count {
            ext.max_count = c;
            ext.max_at = k as u64;
        }
        if c < ext.min_count {
            ext.min_count = c;
            ext.min_at = k as u64;
        }
    }
    if ext.min_count == u64::MAX {
        ext.min_count = 0;
    }
    ext
}
