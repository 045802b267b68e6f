//! Sets with prescribed densities `(B_d, d_, d̄, B̄d) = (r1, r2, r3, r4)`.
//!
//! Construction. Inside a segment `[x, y]` with density `ρ = p/q`, the set
//! takes the Beatty pattern: `n` is a member iff
//! `⌊nρ⌋ - ⌊(n-1)ρ⌋ = 1`. Any window of length `s` inside the segment
//! then holds `sρ` members up to one.
//!
//! The half line is cut into epochs `[a_{m-1}, a_m)` with `a_m = 64·16^m`,
//! preceded by `[0, 64)` at density `r2`. Epoch `m` has base density `r3`
//! for odd `m` and `r2` for even `m`. Its last `2L` points, with
//! `L = ⌊(a_m - a_{m-1}) / 256⌋`, are replaced by a run of length `L` at
//! density `r1` followed by a run of length `L` at density `r4`.
//!
//! Windows inside the `r1`/`r4` runs realize the Banach extremes once
//! `L >= s`; every other window mixes densities in `[r1, r4]`. An epoch is
//! 15 times longer than everything before it, so prefix ratios at epoch
//! ends are within `(r3 - r2)/16 + 2/256` of `r3` (odd epochs) or `r2`
//! (even epochs). At the advertised horizon `a_4` with window `s = 1000`
//! the two last epochs carry runs of length 960 and 15360, which is what
//! the estimator needs to see all four values.
//!
//! The degenerate targets are special-cased: equal targets give a
//! periodic Beatty set (`1/2` gives the evens), and `(0, 0, 0, 1)` gives
//! the factorial blocks `∪ [n!, n!+n]`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use super::{big, FactorialBlocks, IndexSet, PeriodicSet, SetKind, SetSpec};
use crate::error::{Error, Result};

const FIRST_EPOCH_END: u64 = 64;
const EPOCH_GROWTH: u64 = 16;
const RUN_DIVISOR: u64 = 256;
const ADVERTISED_EPOCHS: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrescribedDensitySet {
    targets: [Ratio<u64>; 4],
    shape: Shape,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Shape {
    Uniform(PeriodicSet),
    Factorial,
    Epochs,
}

pub fn make_prescribed_density_set(
    r1: Ratio<u64>,
    r2: Ratio<u64>,
    r3: Ratio<u64>,
    r4: Ratio<u64>,
) -> Result<PrescribedDensitySet> {
    let one = Ratio::from_integer(1);
    if !(r1 <= r2 && r2 <= r3 && r3 <= r4 && r4 <= one) {
        return Err(Error::InvalidArgument(format!(
            "targets must satisfy 0 <= r1 <= r2 <= r3 <= r4 <= 1, got {r1}, {r2}, {r3}, {r4}"
        )));
    }
    let zero = Ratio::from_integer(0);
    let shape = if r1 == r4 {
        let (p, q) = (*r1.numer(), *r1.denom());
        let residues: Vec<u64> = (0..q).filter(|&n| beatty_member(n, p, q)).collect();
        Shape::Uniform(PeriodicSet::new(q, &residues, 0)?)
    } else if r1 == zero && r2 == zero && r3 == zero && r4 == one {
        Shape::Factorial
    } else {
        Shape::Epochs
    };
    Ok(PrescribedDensitySet {
        targets: [r1, r2, r3, r4],
        shape,
    })
}

fn beatty_member(n: u64, p: u64, q: u64) -> bool {
    beatty_count(n as i128, n as i128, p, q) == 1
}

/// `|{n ∈ [x, y]}|` of the Beatty pattern with density `p/q`.
fn beatty_count(x: i128, y: i128, p: u64, q: u64) -> u64 {
    if x > y {
        return 0;
    }
    let (p, q) = (p as i128, q as i128);
    ((y * p).div_euclid(q) - ((x - 1) * p).div_euclid(q)) as u64
}

fn beatty_count_big(x: &BigInt, y: &BigInt, p: u64, q: u64) -> BigUint {
    if x > y {
        return BigUint::zero();
    }
    let (p, q) = (BigInt::from(p), BigInt::from(q));
    let hi = (y * &p).div_floor(&q);
    let lo = ((x - BigInt::from(1)) * &p).div_floor(&q);
    (hi - lo).to_biguint().expect("non-negative count")
}

/// A maximal run `[start, end]` with constant density.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Segment {
    start: BigUint,
    end: BigUint,
    density: Ratio<u64>,
}

impl PrescribedDensitySet {
    pub fn targets(&self) -> [Ratio<u64>; 4] {
        self.targets
    }

    /// Horizon at which the estimator reproduces the targets.
    pub fn advertised_horizon(&self) -> u64 {
        FIRST_EPOCH_END * EPOCH_GROWTH.pow(ADVERTISED_EPOCHS)
    }

    /// Window length to pair with the advertised horizon.
    pub fn advertised_window(&self) -> u64 {
        1000
    }

    /// Epoch boundaries `a_m` not exceeding `limit`.
    pub fn epoch_ends(limit: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut a = FIRST_EPOCH_END;
        while a <= limit {
            out.push(a);
            match a.checked_mul(EPOCH_GROWTH) {
                Some(next) => a = next,
                None => break,
            }
        }
        out
    }

    /// Segments covering `[0, b]`, in order.
    fn segments_through(&self, b: &BigUint) -> Vec<Segment> {
        let [r1, r2, r3, r4] = self.targets;
        let mut out = vec![Segment {
            start: BigUint::zero(),
            end: big(FIRST_EPOCH_END - 1),
            density: r2,
        }];
        let mut prev = big(FIRST_EPOCH_END);
        let mut m = 1u64;
        while &prev <= b {
            let next = &prev * EPOCH_GROWTH;
            let run: BigUint = (&next - &prev) / RUN_DIVISOR;
            let base = if m % 2 == 1 { r3 } else { r2 };
            let low_start = &next - &run * 2u32;
            let high_start = &next - &run;
            out.push(Segment {
                start: prev.clone(),
                end: &low_start - 1u32,
                density: base,
            });
            out.push(Segment {
                start: low_start,
                end: &high_start - 1u32,
                density: r1,
            });
            out.push(Segment {
                start: high_start,
                end: &next - 1u32,
                density: r4,
            });
            prev = next;
            m += 1;
        }
        out.retain(|s| s.start <= s.end);
        out
    }
}

impl IndexSet for PrescribedDensitySet {
    fn kind(&self) -> SetKind {
        match &self.shape {
            Shape::Uniform(_) => SetKind::Periodic,
            Shape::Factorial | Shape::Epochs => SetKind::IntervalUnion,
        }
    }

    fn contains(&self, n: &BigUint) -> bool {
        match &self.shape {
            Shape::Uniform(p) => p.contains(n),
            Shape::Factorial => FactorialBlocks.contains(n),
            Shape::Epochs => !self.count_window(n, n).is_zero(),
        }
    }

    fn members_u64(&self, a: u64, b: u64) -> Vec<u64> {
        match &self.shape {
            Shape::Uniform(p) => p.members_u64(a, b),
            Shape::Factorial => FactorialBlocks.members_u64(a, b),
            Shape::Epochs => {
                let mut out = Vec::new();
                if a > b {
                    return out;
                }
                for seg in self.segments_through(&big(b)) {
                    let (s, e) = (seg.start.to_u64(), seg.end.to_u64());
                    let s = s.expect("segment below b").max(a);
                    let e = e.map_or(b, |e| e.min(b));
                    let (p, q) = (*seg.density.numer(), *seg.density.denom());
                    out.extend((s..=e).filter(|&n| beatty_member(n, p, q)));
                }
                out
            }
        }
    }

    fn enumerate(&self, a: &BigUint, b: &BigUint) -> Vec<BigUint> {
        match (a.to_u64(), b.to_u64()) {
            (Some(a), Some(b)) => self.members_u64(a, b).into_iter().map(big).collect(),
            _ => {
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
        }
    }

    fn count_window(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a > b {
            return BigUint::zero();
        }
        match &self.shape {
            Shape::Uniform(p) => p.count_window(a, b),
            Shape::Factorial => FactorialBlocks.count_window(a, b),
            Shape::Epochs => {
                let mut total = BigUint::zero();
                for seg in self.segments_through(b) {
                    let s = seg.start.max(a.clone());
                    let e = seg.end.min(b.clone());
                    if s <= e {
                        let (p, q) = (*seg.density.numer(), *seg.density.denom());
                        total += beatty_count_big(&s.into(), &e.into(), p, q);
                    }
                }
                total
            }
        }
    }

    fn anchors(&self, horizon: u64) -> Vec<u64> {
        match &self.shape {
            Shape::Uniform(p) => p.anchors(horizon),
            Shape::Factorial => FactorialBlocks.anchors(horizon),
            Shape::Epochs => self
                .segments_through(&big(horizon))
                .into_iter()
                .filter_map(|s| s.start.to_u64())
                .filter(|&s| s <= horizon)
                .collect(),
        }
    }

    fn spec(&self) -> Option<SetSpec> {
        Some(SetSpec::Prescribed(self.targets))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index_sets::{estimate_densities, to_f64};

    fn r(n: u64, d: u64) -> Ratio<u64> {
        Ratio::new(n, d)
    }

    #[test]
    fn half_is_evens() {
        let s = make_prescribed_density_set(r(1, 2), r(1, 2), r(1, 2), r(1, 2)).unwrap();
        assert_eq!(s.members_u64(0, 9), vec![0, 2, 4, 6, 8]);
    }

    #[test]
    fn zero_zero_zero_one_is_factorial() {
        let s = make_prescribed_density_set(r(0, 1), r(0, 1), r(0, 1), r(1, 1)).unwrap();
        assert_eq!(s.members_u64(0, 30), FactorialBlocks.members_u64(0, 30));
    }

    #[test]
    fn rejects_disorder() {
        assert!(make_prescribed_density_set(r(1, 2), r(1, 5), r(1, 2), r(1, 1)).is_err());
        assert!(make_prescribed_density_set(r(0, 1), r(1, 5), r(1, 2), r(3, 2)).is_err());
    }

    #[test]
    fn counts_agree_with_members() {
        let s = make_prescribed_density_set(r(1, 10), r(1, 5), r(1, 2), r(9, 10)).unwrap();
        for (a, b) in [(0u64, 100u64), (60, 70), (900, 1100), (1000, 20_000)] {
            let n = s.members_u64(a, b).len();
            assert_eq!(s.count_window(&big(a), &big(b)), big(n as u64), "[{a},{b}]");
        }
        for n in 0..2000 {
            assert_eq!(s.contains_u64(n), !s.members_u64(n, n).is_empty());
        }
    }

    #[test]
    fn segment_density_exact() {
        assert_eq!(beatty_count(0, 9, 1, 5), 2);
        assert_eq!(beatty_count(0, 0, 1, 3), 1);
        assert_eq!(beatty_count(0, 99, 2, 7), 29);
    }

    #[test]
    fn reproduces_targets() {
        let s = make_prescribed_density_set(r(0, 1), r(1, 5), r(1, 2), r(1, 1)).unwrap();
        let h = s.advertised_horizon();
        let rep = estimate_densities(&s, h, &[s.advertised_window()]).unwrap();
        let got = rep.as_f64();
        for (g, t) in got.iter().zip(s.targets()) {
            assert!((g - to_f64(t)).abs() <= 0.05, "{got:?}");
        }
    }
}
