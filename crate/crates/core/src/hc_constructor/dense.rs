//! An enumeration of all nonzero finitely supported dyadic vectors.
//!
//! Write a vector as `(a_0, ..., a_{s-1}) / 2^e` with `a_{s-1} != 0` and
//! `e` minimal. Its height is `max(s, e + 1, max |a_m|)`. Each height class
//! is finite; classes are listed in increasing height and, inside a class,
//! by `(s, e, Σ|a_m|, coefficients)` with coefficients compared in the
//! order `0, 1, -1, 2, -2, ...`.

use crate::error::Result;
use crate::sequence_spaces::{SpaceSpec, SparseVec};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    support: usize,
    exponent: u32,
    mass: i64,
    coeffs: Vec<i64>,
}

fn rank(a: i64) -> i64 {
    if a > 0 {
        2 * a - 1
    } else {
        -2 * a
    }
}

fn height_class(h: usize) -> Vec<(Vec<i64>, u32)> {
    let bound = h as i64;
    let mut keys: Vec<Key> = Vec::new();
    for s in 1..=h {
        for e in 0..h as u32 {
            let mut a = vec![-bound; s];
            loop {
                let top = a.iter().map(|x| x.abs()).max().unwrap_or(0) as usize;
                let minimal = e == 0 || a.iter().any(|x| x % 2 != 0);
                if a[s - 1] != 0 && minimal && s.max(e as usize + 1).max(top) == h {
                    keys.push(Key {
                        support: s,
                        exponent: e,
                        mass: a.iter().map(|x| x.abs()).sum(),
                        coeffs: a.iter().map(|&x| rank(x)).collect(),
                    });
                }
                // odometer over [-bound, bound]^s
                let mut i = 0;
                while i < s && a[i] == bound {
                    a[i] = -bound;
                    i += 1;
                }
                if i == s {
                    break;
                }
                a[i] += 1;
            }
        }
    }
    keys.sort();
    keys.into_iter()
        .map(|k| {
            let coeffs = k
                .coeffs
                .iter()
                .map(|&r| if r % 2 == 1 { (r + 1) / 2 } else { -r / 2 })
                .collect();
            (coeffs, k.exponent)
        })
        .collect()
}

/// `y_1, y_2, ...`: `y_1 = e_0`, `y_2 = -e_0`, then height two onwards.
#[derive(Clone, Debug)]
pub struct DenseSequence {
    space: SpaceSpec,
    items: Vec<(Vec<i64>, u32)>,
    height: usize,
}

impl DenseSequence {
    pub fn new(space: SpaceSpec) -> Self {
        DenseSequence {
            space,
            items: Vec::new(),
            height: 0,
        }
    }

    pub fn space(&self) -> SpaceSpec {
        self.space
    }

    fn fill(&mut self, l: usize) {
        while self.items.len() < l {
            self.height += 1;
            self.items.extend(height_class(self.height));
        }
    }

    /// `y_l` for `l >= 1`.
    pub fn item(&mut self, l: usize) -> Result<SparseVec> {
        assert!(l >= 1, "the sequence starts at l = 1");
        self.fill(l);
        let (a, e) = &self.items[l - 1];
        let scale = (-(*e as f64)).exp2();
        SparseVec::from_entries(
            self.space,
            a.iter().enumerate().map(|(m, &x)| (m as i64, x as f64 * scale)),
        )
    }

    /// `y_1, ..., y_n`.
    pub fn take(&mut self, n: usize) -> Result<Vec<SparseVec>> {
        (1..=n).map(|l| self.item(l)).collect()
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    #[test]
    fn first_items() {
        let mut y = DenseSequence::new(SpaceSpec::l2());
        let e0 = SparseVec::basis(SpaceSpec::l2(), 0).unwrap();
        assert_eq!(y.item(1).unwrap(), e0);
        assert_eq!(y.item(2).unwrap(), e0.scale(-1.0));
        assert_eq!(y.item(3).unwrap(), e0.scale(2.0));
        assert_eq!(y.item(5).unwrap(), e0.scale(0.5));
    }

    #[test]
    fn class_sizes() {
        assert_eq!(height_class(1).len(), 2);
        // s = 1: ±2, ±1/2; s = 2, e = 0: 5·4; s = 2, e = 1: 20 minus 6 all-even
        assert_eq!(height_class(2).len(), 38);
    }

    #[test]
    fn no_repeats() {
        let mut y = DenseSequence::new(SpaceSpec::c0());
        let items = y.take(2000).unwrap();
        let seen: HashSet<String> = items.iter().map(|v| v.to_text()).collect();
        assert_eq!(seen.len(), items.len());
        assert!(items.iter().all(|v| !v.is_zero()));
    }
}
