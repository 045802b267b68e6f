//! Non-negative integers that may be too large for positional storage.
//!
//! The block family of the `c_0` counterexample places its blocks at
//! `10^{j0}` where `j0` itself exceeds the largest previously placed index,
//! so the indices form a power tower. `HugeIndex` stores such numbers as
//! `10^exponent + offset` with a recursively represented exponent and a
//! small offset, which is enough for exact ordering, small additions and
//! lower bounds on distances.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Decimal digits below which a value is always stored exactly.
pub const EXACT_DIGITS: u32 = 1024;

fn ten_pow(e: u32) -> BigUint {
    BigUint::from(10u32).pow(e)
}

fn exact_cap() -> BigUint {
    ten_pow(EXACT_DIGITS)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HugeIndex {
    /// A value below `10^EXACT_DIGITS`.
    Exact(BigUint),
    /// `10^exponent + offset` with `exponent >= EXACT_DIGITS` and
    /// `offset < 10^EXACT_DIGITS`.
    Tower {
        exponent: Box<HugeIndex>,
        offset: BigUint,
    },
}

/// Lower bound on (or exact value of) the distance between two indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distance {
    Exact(BigUint),
    AtLeast(BigUint),
}

impl Distance {
    /// True when the distance is provably `>= bound`.
    pub fn at_least(&self, bound: &BigUint) -> bool {
        match self {
            Distance::Exact(d) | Distance::AtLeast(d) => d >= bound,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Distance::Exact(d) if d.is_zero())
    }

    /// The known lower bound.
    pub fn lower(&self) -> &BigUint {
        match self {
            Distance::Exact(d) | Distance::AtLeast(d) => d,
        }
    }
}

impl HugeIndex {
    pub fn zero() -> Self {
        HugeIndex::Exact(BigUint::zero())
    }

    pub fn from_u64(n: u64) -> Self {
        HugeIndex::Exact(BigUint::from(n))
    }

    pub fn from_biguint(n: BigUint) -> Self {
        let cap = exact_cap();
        if n < cap {
            HugeIndex::Exact(n)
        } else {
            // n < 10^EXACT_DIGITS * 10 is the only case reachable from
            // additions of small offsets; larger literals are re-expressed
            // around their leading power of ten.
            let digits = n.to_str_radix(10).len() as u32;
            let base = ten_pow(digits - 1);
            let offset = &n - &base;
            if offset >= cap {
                panic!("HugeIndex offset exceeds 10^{EXACT_DIGITS}");
            }
            HugeIndex::Tower {
                exponent: Box::new(HugeIndex::from_u64(u64::from(digits - 1))),
                offset,
            }
        }
    }

    /// `10^exponent`.
    pub fn pow10(exponent: HugeIndex) -> Self {
        match &exponent {
            HugeIndex::Exact(e) if *e < BigUint::from(EXACT_DIGITS) => {
                let e: u32 = e.try_into().expect("small exponent");
                HugeIndex::Exact(ten_pow(e))
            }
            _ => HugeIndex::Tower {
                exponent: Box::new(exponent),
                offset: BigUint::zero(),
            },
        }
    }

    pub fn as_exact(&self) -> Option<&BigUint> {
        match self {
            HugeIndex::Exact(n) => Some(n),
            HugeIndex::Tower { .. } => None,
        }
    }

    /// Exact positional value when it has at most `EXACT_DIGITS + 2` digits.
    fn materialize(&self) -> Option<BigUint> {
        match self {
            HugeIndex::Exact(n) => Some(n.clone()),
            HugeIndex::Tower { exponent, offset } => {
                let e = exponent.as_exact()?;
                if *e <= BigUint::from(EXACT_DIGITS + 1) {
                    let e: u32 = e.try_into().ok()?;
                    Some(ten_pow(e) + offset)
                } else {
                    None
                }
            }
        }
    }

    pub fn add(&self, c: &BigUint) -> Self {
        match self {
            HugeIndex::Exact(n) => HugeIndex::from_biguint(n + c),
            HugeIndex::Tower { exponent, offset } => {
                let offset = offset + c;
                assert!(offset < exact_cap(), "HugeIndex offset exceeds 10^{EXACT_DIGITS}");
                HugeIndex::Tower {
                    exponent: exponent.clone(),
                    offset,
                }
            }
        }
    }

    pub fn add_u64(&self, c: u64) -> Self {
        self.add(&BigUint::from(c))
    }

    /// Smallest `e` with `10^e >= self`.
    pub fn ceil_log10(&self) -> HugeIndex {
        match self {
            HugeIndex::Exact(n) => {
                if n <= &BigUint::one() {
                    return HugeIndex::zero();
                }
                let m = n - 1u32;
                HugeIndex::from_u64(m.to_str_radix(10).len() as u64)
            }
            HugeIndex::Tower { exponent, offset } => {
                if offset.is_zero() {
                    (**exponent).clone()
                } else {
                    exponent.add_u64(1)
                }
            }
        }
    }

    /// Distance `|self - other|`, exact when both share a representation
    /// scale, otherwise a lower bound.
    pub fn distance(&self, other: &HugeIndex) -> Distance {
        let (lo, hi) = if self <= other { (self, other) } else { (other, self) };
        match (lo, hi) {
            (HugeIndex::Exact(a), HugeIndex::Exact(b)) => Distance::Exact(b - a),
            (
                HugeIndex::Tower { exponent: ea, offset: oa },
                HugeIndex::Tower { exponent: eb, offset: ob },
            ) if ea == eb => Distance::Exact(ob - oa),
            (HugeIndex::Exact(a), HugeIndex::Tower { .. }) => match hi.materialize() {
                Some(b) => Distance::Exact(b - a),
                // hi >= 10^(EXACT_DIGITS + 2), lo < 10^EXACT_DIGITS
                None => Distance::AtLeast(ten_pow(EXACT_DIGITS + 1)),
            },
            // different exponents ea < eb: hi >= 10^(ea+1), lo < 2 * 10^ea
            _ => Distance::AtLeast(BigUint::from(8u32) * exact_cap()),
        }
    }
}

impl Ord for HugeIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (HugeIndex::Exact(a), HugeIndex::Exact(b)) => a.cmp(b),
            (HugeIndex::Exact(_), HugeIndex::Tower { .. }) => Ordering::Less,
            (HugeIndex::Tower { .. }, HugeIndex::Exact(_)) => Ordering::Greater,
            (
                HugeIndex::Tower { exponent: ea, offset: oa },
                HugeIndex::Tower { exponent: eb, offset: ob },
            ) => ea.cmp(eb).then_with(|| oa.cmp(ob)),
        }
    }
}

impl PartialOrd for HugeIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for HugeIndex {
    fn from(n: u64) -> Self {
        HugeIndex::from_u64(n)
    }
}

impl From<BigUint> for HugeIndex {
    fn from(n: BigUint) -> Self {
        HugeIndex::from_biguint(n)
    }
}

fn fmt_exact(n: &BigUint, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let s = n.to_str_radix(10);
    if s.len() > 40 {
        let base = ten_pow(s.len() as u32 - 1);
        let rest = n - &base;
        if rest.to_str_radix(10).len() < 24 {
            return if rest.is_zero() {
                write!(f, "10^{}", s.len() - 1)
            } else {
                write!(f, "10^{}+{}", s.len() - 1, rest)
            };
        }
    }
    write!(f, "{s}")
}

impl fmt::Display for HugeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HugeIndex::Exact(n) => fmt_exact(n, f),
            HugeIndex::Tower { exponent, offset } => {
                write!(f, "10^({exponent})")?;
                if !offset.is_zero() {
                    write!(f, "+{offset}")?;
                }
                Ok(())
            }
        }
    }
}
