//! Finitely supported real sequences in `ℓ^p` or `c_0`, indexed by `Z_+`
//! or `Z`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormKind {
    Lp(f64),
    /// The sup norm of `c_0`.
    Sup,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Laterality {
    Unilateral,
    Bilateral,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpaceSpec {
    pub norm: NormKind,
    pub laterality: Laterality,
}

impl SpaceSpec {
    pub fn lp(p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::InvalidArgument(format!("lp needs 1 <= p < inf, got {p}")));
        }
        Ok(SpaceSpec {
            norm: NormKind::Lp(p),
            laterality: Laterality::Unilateral,
        })
    }

    pub fn l2() -> Self {
        Self::lp(2.0).expect("p = 2")
    }

    pub fn c0() -> Self {
        SpaceSpec {
            norm: NormKind::Sup,
            laterality: Laterality::Unilateral,
        }
    }

    pub fn bilateral(mut self) -> Self {
        self.laterality = Laterality::Bilateral;
        self
    }

    pub fn is_bilateral(&self) -> bool {
        self.laterality == Laterality::Bilateral
    }

    /// Exponent `p`, or `None` for `c_0`.
    pub fn exponent(&self) -> Option<f64> {
        match self.norm {
            NormKind::Lp(p) => Some(p),
            NormKind::Sup => None,
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.norm {
            NormKind::Lp(p) => write!(f, "l{p}")?,
            NormKind::Sup => f.write_str("c0")?,
        }
        if self.is_bilateral() {
            f.write_str("(Z)")?;
        }
        Ok(())
    }
}

impl FromStr for SpaceSpec {
    type Err = Error;

    /// `l2`, `l1.5`, `c0`, each optionally followed by `(Z)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, bilateral) = match s.strip_suffix("(Z)") {
            Some(b) => (b, true),
            None => (s, false),
        };
        let space = if body == "c0" {
            SpaceSpec::c0()
        } else if let Some(p) = body.strip_prefix('l') {
            let p: f64 = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            SpaceSpec::lp(p)?
        } else {
            return Err(Error::Parse(format!("unknown space {s:?}")));
        };
        Ok(if bilateral { space.bilateral() } else { space })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SparseVec {
    entries: BTreeMap<i64, f64>,
    space: SpaceSpec,
}

impl SparseVec {
    pub fn zero(space: SpaceSpec) -> Self {
        SparseVec {
            entries: BTreeMap::new(),
            space,
        }
    }

    /// `e_k`.
    pub fn basis(space: SpaceSpec, k: i64) -> Result<Self> {
        Self::from_entries(space, [(k, 1.0)])
    }

    /// Builds a vector, dropping zeros and summing repeated indices.
    pub fn from_entries<I: IntoIterator<Item = (i64, f64)>>(space: SpaceSpec, entries: I) -> Result<Self> {
        let mut v = Self::zero(space);
        for (i, x) in entries {
            v.check_index(i)?;
            *v.entries.entry(i).or_insert(0.0) += x;
        }
        v.entries.retain(|_, x| *x != 0.0);
        Ok(v)
    }

    fn check_index(&self, i: i64) -> Result<()> {
        if i < 0 && !self.space.is_bilateral() {
            return Err(Error::InvalidArgument(format!(
                "negative index {i} in unilateral space {}",
                self.space
            )));
        }
        Ok(())
    }

    pub fn space(&self) -> SpaceSpec {
        self.space
    }

    pub fn get(&self, i: i64) -> f64 {
        self.entries.get(&i).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, i: i64, x: f64) -> Result<()> {
        self.check_index(i)?;
        if x == 0.0 {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, x);
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.entries.iter().map(|(&i, &x)| (i, x))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Smallest and largest support index.
    pub fn support_bounds(&self) -> Option<(i64, i64)> {
        let lo = *self.entries.keys().next()?;
        let hi = *self.entries.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn scale(&self, lambda: f64) -> Self {
        let mut out = Self::zero(self.space);
        if lambda != 0.0 {
            for (i, x) in self.iter() {
                let y = lambda * x;
                if y != 0.0 {
                    out.entries.insert(i, y);
                }
            }
        }
        out
    }

    fn same_space(&self, other: &SparseVec) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch {
                left: self.space.to_string(),
                right: other.space.to_string(),
            });
        }
        Ok(())
    }

    /// `self + lambda·other`.
    pub fn axpy(&self, lambda: f64, other: &SparseVec) -> Result<Self> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (i, x) in other.iter() {
            let e = out.entries.entry(i).or_insert(0.0);
            *e += lambda * x;
            if *e == 0.0 {
                out.entries.remove(&i);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &SparseVec) -> Result<Self> {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &SparseVec) -> Result<Self> {
        self.axpy(-1.0, other)
    }

    pub fn norm(&self) -> f64 {
        norm_of(self.space, self.entries.values().copied())
    }

    pub fn distance(&self, other: &SparseVec) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    /// Lines `index value` after a `space <spec>` header.
    pub fn to_text(&self) -> String {
        let mut out = format!("space {}\n", self.space);
        for (i, x) in self.iter() {
            out.push_str(&format!("{i} {x:e}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty vector".into()))?;
        let space: SpaceSpec = header
            .strip_prefix("space ")
            .ok_or_else(|| Error::Parse(format!("expected `space <spec>`, got {header:?}")))?
            .parse()?;
        let mut entries = Vec::new();
        for l in lines {
            let (i, x) = l
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::Parse(format!("bad entry line {l:?}")))?;
            let i: i64 = i.parse().map_err(|_| Error::Parse(format!("bad index {i:?}")))?;
            let x: f64 = x.trim().parse().map_err(|_| Error::Parse(format!("bad value {x:?}")))?;
            entries.push((i, x));
        }
        Self::from_entries(space, entries)
    }
}

/// Norm of a finite list of coordinates, scaled by the largest modulus so
/// that neither tiny nor huge entries lose the sum.
pub fn norm_of<I: IntoIterator<Item = f64>>(space: SpaceSpec, values: I) -> f64 {
    let values: Vec<f64> = values.into_iter().map(f64::abs).collect();
    let m = values.iter().copied().fold(0.0, f64::max);
    if m == 0.0 || !m.is_finite() {
        return m;
    }
    match space.norm {
        NormKind::Sup => m,
        NormKind::Lp(p) => {
            let s: f64 = values.iter().map(|x| (x / m).powf(p)).sum();
            m * s.powf(1.0 / p)
        }
    }
}

pub fn norm(v: &SparseVec) -> f64 {
    v.norm()
}

/// `‖v - center‖ < radius`.
pub fn ball_contains(center: &SparseVec, radius: f64, v: &SparseVec) -> Result<bool> {
    Ok(v.distance(center)? < radius)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_examples() {
        for s in [SpaceSpec::l2(), SpaceSpec::c0(), SpaceSpec::lp(1.0).unwrap()] {
            assert_eq!(SparseVec::basis(s, 0).unwrap().norm(), 1.0);
        }
        let v = SparseVec::from_entries(SpaceSpec::l2(), [(0, 3.0), (1, 4.0)]).unwrap();
        assert_eq!(v.norm(), 5.0);
        let v = SparseVec::from_entries(SpaceSpec::c0(), [(0, 1.0), (1, 1.0), (2, 1.0)]).unwrap();
        assert_eq!(v.norm(), 1.0);
    }

    #[test]
    fn balls() {
        let s = SpaceSpec::l2();
        let e0 = SparseVec::basis(s, 0).unwrap();
        let e1 = SparseVec::basis(s, 1).unwrap();
        assert!(ball_contains(&e0, 1.0, &e0).unwrap());
        assert!(!ball_contains(&e0, 1.0, &e1).unwrap());
        let c = SpaceSpec::c0();
        let v = SparseVec::from_entries(c, [(3, 0.49), (7, -0.2)]).unwrap();
        assert!(ball_contains(&SparseVec::zero(c), 0.5, &v).unwrap());
        assert!(matches!(
            ball_contains(&e0, 1.0, &SparseVec::zero(c)),
            Err(Error::SpaceMismatch { .. })
        ));
    }

    #[test]
    fn tiny_entries_keep_their_norm() {
        let v = SparseVec::from_entries(SpaceSpec::l2(), [(0, 1e-200), (1, 1e-200)]).unwrap();
        assert!((v.norm() / 1e-200 - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn unilateral_rejects_negative() {
        assert!(SparseVec::basis(SpaceSpec::l2(), -1).is_err());
        assert!(SparseVec::basis(SpaceSpec::l2().bilateral(), -1).is_ok());
    }

    #[test]
    fn text_round_trip() {
        let v = SparseVec::from_entries(
            SpaceSpec::lp(1.5).unwrap().bilateral(),
            [(-3, 0.1), (0, -2.5), (9, 1.0 / 3.0)],
        )
        .unwrap();
        assert_eq!(SparseVec::from_text(&v.to_text()).unwrap(), v);
        assert_eq!("c0(Z)".parse::<SpaceSpec>().unwrap(), SpaceSpec::c0().bilateral());
    }
}
