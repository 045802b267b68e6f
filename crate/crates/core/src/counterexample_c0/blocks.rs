//! The block family `F_j` and the sets `A_k = ∪_{φ(j)=k} F_j`.
//!
//! `F_0 = {0}`. Given `F_0, ..., F_j` and `k = φ(j+1)`,
//! `F_{j+1} = {10^{j0} + 10^{2k}·l : 0 <= l < l0}` for the least `(j0, l0)`
//! with
//!
//! 1. `l0 >= j+1`,
//! 2. `10^{j0} >= k + max φ + max ∪F`,
//! 3. `j0 >= j+1` and `j0 - k > 10^{2k}·l0`,
//! 4. `j0 > max ∪F + max φ + 2k`,
//!
//! where both maxima run over the blocks built so far (an empty `max φ`
//! is 0). Condition 4 makes `j0` exceed the previous block, so positions
//! grow as a power tower and are kept as [`HugeIndex`] values.

use std::fmt;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::index_sets::{
    check_gap_points, GapVerdict, HugeIndex, IndexSet, SetFamily, SetKind, SharedSet,
};

/// `φ(i)` cycling through `1..=k_max`.
pub fn phi(i: usize, k_max: usize) -> usize {
    (i - 1) % k_max + 1
}

fn ten_pow(e: u64) -> BigUint {
    BigUint::from(10u32).pow(e as u32)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    /// Index `j` of `F_j`.
    pub index: usize,
    /// `k = φ(j)`.
    pub level: usize,
    pub j0: HugeIndex,
    pub l0: u64,
}

impl Block {
    /// Spacing `10^{2k}`.
    pub fn spacing(&self) -> BigUint {
        ten_pow(2 * self.level as u64)
    }

    pub fn min(&self) -> HugeIndex {
        HugeIndex::pow10(self.j0.clone())
    }

    pub fn max(&self) -> HugeIndex {
        self.min().add(&(self.spacing() * (self.l0 - 1)))
    }

    pub fn members(&self) -> Vec<HugeIndex> {
        let base = self.min();
        let g = self.spacing();
        (0..self.l0).map(|l| base.add(&(&g * l))).collect()
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F_{} (k={}): j0={}, l0={}, min={}",
            self.index,
            self.level,
            self.j0,
            self.l0,
            self.min()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockFamily {
    pub k_max: usize,
    pub reps: usize,
    /// `F_1, F_2, ...`; `F_0 = {0}` is implicit.
    pub blocks: Vec<Block>,
}

impl BlockFamily {
    pub fn label(&self) -> String {
        format!(
            "block family, phi cycling 1..={} truncated to {} repetitions",
            self.k_max, self.reps
        )
    }

    /// Blocks `F_j` with `φ(j) = k`.
    pub fn blocks_of(&self, k: usize) -> impl Iterator<Item = &Block> {
        self.blocks.iter().filter(move |b| b.level == k)
    }

    /// Every element of every `F_j`, `j >= 1`, tagged with `φ(j)`.
    pub fn gap_points(&self) -> Vec<(usize, HugeIndex)> {
        self.blocks
            .iter()
            .flat_map(|b| b.members().into_iter().map(move |m| (b.level, m)))
            .collect()
    }

    /// Symbolic check of `|j' - j| >= max(k, k')` over all blocks.
    pub fn check_gaps(&self) -> GapVerdict {
        check_gap_points(&self.gap_points())
    }

    pub fn level_set(&self, k: usize) -> BlockLevelSet {
        BlockLevelSet {
            level: k,
            blocks: self.blocks_of(k).cloned().collect(),
        }
    }

    pub fn set_family(&self) -> SetFamily {
        let sets: Vec<SharedSet> = (1..=self.k_max)
            .map(|k| std::sync::Arc::new(self.level_set(k)) as SharedSet)
            .collect();
        SetFamily::new(self.label(), sets)
    }
}

/// `A_k` restricted to the built blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLevelSet {
    pub level: usize,
    pub blocks: Vec<Block>,
}

impl IndexSet for BlockLevelSet {
    fn kind(&self) -> SetKind {
        SetKind::BlockFamily
    }

    fn contains(&self, n: &BigUint) -> bool {
        let n = HugeIndex::from_biguint(n.clone());
        self.blocks.iter().any(|b| {
            let (lo, hi) = (b.min(), b.max());
            if n < lo || n > hi {
                return false;
            }
            match lo.distance(&n) {
                crate::index_sets::Distance::Exact(d) => (d % b.spacing()).is_zero(),
                crate::index_sets::Distance::AtLeast(_) => false,
            }
        })
    }

    fn enumerate(&self, a: &BigUint, b: &BigUint) -> Vec<BigUint> {
        let mut out: Vec<BigUint> = self
            .blocks
            .iter()
            .flat_map(|blk| blk.members())
            .filter_map(|m| m.as_exact().cloned())
            .filter(|m| m >= a && m <= b)
            .collect();
        out.sort();
        out
    }

    fn members_u64(&self, a: u64, b: u64) -> Vec<u64> {
        self.enumerate(&BigUint::from(a), &BigUint::from(b))
            .into_iter()
            .filter_map(|m| m.to_u64())
            .collect()
    }

    fn count_window(&self, a: &BigUint, b: &BigUint) -> BigUint {
        BigUint::from(self.enumerate(a, b).len())
    }
}

struct Running {
    max_f: HugeIndex,
    max_phi: u64,
}

/// Least admissible `(j0, l0)` for `F_{j+1}` at level `k`.
fn minimal_parameters(j: u64, k: u64, run: &Running) -> (HugeIndex, u64) {
    let l0 = j + 1;
    // 2): 10^{j0} >= k + max φ + max ∪F
    let c2 = run.max_f.add_u64(k + run.max_phi).ceil_log10();
    // 3): j0 >= j+1 and j0 >= k + 10^{2k}·l0 + 1
    let c3 = HugeIndex::from_biguint(ten_pow(2 * k) * l0 + k + 1u32).max(HugeIndex::from_u64(j + 1));
    // 4): j0 >= max ∪F + max φ + 2k + 1
    let c4 = run.max_f.add_u64(run.max_phi + 2 * k + 1);
    let j0 = c2.max(c3).max(c4);
    (j0, l0)
}

pub fn build_block_family(k_max: usize, reps: usize) -> Result<BlockFamily> {
    if k_max == 0 || reps == 0 {
        return Err(Error::InvalidArgument("k_max and reps must be >= 1".into()));
    }
    let mut run = Running {
        max_f: HugeIndex::zero(),
        max_phi: 0,
    };
    let mut blocks = Vec::with_capacity(k_max * reps);
    for j in 0..k_max * reps {
        let k = phi(j + 1, k_max);
        let (j0, l0) = minimal_parameters(j as u64, k as u64, &run);
        let block = Block {
            index: j + 1,
            level: k,
            j0,
            l0,
        };
        run.max_f = run.max_f.clone().max(block.max());
        run.max_phi = run.max_phi.max(k as u64);
        blocks.push(block);
    }
    Ok(BlockFamily {
        k_max,
        reps,
        blocks,
    })
}

/// Conditions 1)–4) for one block, evaluated from scratch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub index: usize,
    pub holds: [bool; 4],
    /// True when `j0 - 1` violates at least one condition.
    pub j0_minimal: bool,
}

impl ConditionReport {
    pub fn all_hold(&self) -> bool {
        self.holds.iter().all(|&h| h)
    }
}

fn conditions(j: u64, k: u64, j0: &HugeIndex, l0: u64, max_f: &HugeIndex, max_phi: u64) -> [bool; 4] {
    let c1 = l0 > j;
    let c2 = HugeIndex::pow10(j0.clone()) >= max_f.add_u64(k + max_phi);
    let c3 = *j0 >= HugeIndex::from_u64(j + 1)
        && *j0 > HugeIndex::from_biguint(ten_pow(2 * k) * l0 + k);
    let c4 = *j0 > max_f.add_u64(max_phi + 2 * k);
    [c1, c2, c3, c4]
}

/// Re-derives the running maxima from the blocks and checks every block.
pub fn verify_conditions(family: &BlockFamily) -> Vec<ConditionReport> {
    let mut max_f = HugeIndex::zero();
    let mut max_phi = 0u64;
    let mut out = Vec::new();
    for (j, b) in family.blocks.iter().enumerate() {
        let (j, k) = (j as u64, b.level as u64);
        let holds = conditions(j, k, &b.j0, b.l0, &max_f, max_phi);
        let j0_minimal = match &b.j0 {
            HugeIndex::Exact(e) if e.is_zero() => true,
            HugeIndex::Exact(e) => {
                let smaller = HugeIndex::from_biguint(e - 1u32);
                !conditions(j, k, &smaller, b.l0, &max_f, max_phi)
                    .iter()
                    .all(|&h| h)
            }
            // j0 - 1 keeps the tower exponent whenever the offset is positive
            HugeIndex::Tower { exponent, offset } if !offset.is_zero() => {
                let smaller = HugeIndex::Tower {
                    exponent: exponent.clone(),
                    offset: offset - 1u32,
                };
                !conditions(j, k, &smaller, b.l0, &max_f, max_phi)
                    .iter()
                    .all(|&h| h)
            }
            HugeIndex::Tower { .. } => false,
        };
        out.push(ConditionReport {
            index: b.index,
            holds,
            j0_minimal,
        });
        max_f = max_f.max(b.max());
        max_phi = max_phi.max(k);
    }
    out
}

/// `|{l ∈ [0, l0) : lo <= g·l <= hi}|`.
pub fn banach_window_count(l0: u64, g: &BigUint, lo: &BigUint, hi: &BigUint) -> BigUint {
    if lo > hi || l0 == 0 {
        return BigUint::zero();
    }
    let first = (lo + g - 1u32) / g;
    let last = (hi / g).min(BigUint::from(l0 - 1));
    if first > last {
        BigUint::zero()
    } else {
        last - first + 1u32
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BanachCheck {
    pub level: usize,
    pub l0: u64,
    pub s: BigUint,
    /// Members of the block in `[min F, min F + s - 1]`.
    pub count: BigUint,
    pub ratio: Ratio<BigUint>,
    /// Members in the shifted window `[min F + 1, min F + s]`.
    pub shifted_count: BigUint,
    pub shifted_ratio: Ratio<BigUint>,
    /// `(1 - 1/l0) / 10^{2k}`.
    pub required: Ratio<BigUint>,
    pub holds: bool,
}

impl BanachCheck {
    /// Window ratio for a block of level `k` with `l0` elements at
    /// `s = 10^{2k}·l0`.
    pub fn for_block(level: usize, l0: u64) -> Result<Self> {
        if l0 < 2 {
            return Err(Error::InsufficientBlock { l0 });
        }
        let g = ten_pow(2 * level as u64);
        let s = &g * l0;
        let count = banach_window_count(l0, &g, &BigUint::zero(), &(&s - 1u32));
        let shifted_count = banach_window_count(l0, &g, &BigUint::from(1u32), &s);
        let ratio = Ratio::new(count.clone(), s.clone());
        let shifted_ratio = Ratio::new(shifted_count.clone(), s.clone());
        let required = Ratio::new(BigUint::from(l0 - 1), s.clone());
        let holds = ratio >= required && shifted_ratio >= required;
        Ok(BanachCheck {
            level,
            l0,
            s,
            count,
            ratio,
            shifted_count,
            shifted_ratio,
            required,
            holds,
        })
    }
}

/// Checks the largest block of level `k` in the family.
pub fn banach_lower_bound_check(family: &BlockFamily, k: usize) -> Result<BanachCheck> {
    let l0 = family.blocks_of(k).map(|b| b.l0).max().unwrap_or(0);
    BanachCheck::for_block(k, l0)
}
