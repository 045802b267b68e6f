use super::WeightSequence;
use crate::error::{Error, Result};
use crate::sequence_spaces::{NormKind, SpaceSpec, SparseVec};

/// `B_w (x_n) = (w_{n+1} x_{n+1})` on a configured space.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftOperator {
    weights: WeightSequence,
    space: SpaceSpec,
}

/// `log2 ‖v‖` from the `log2 |v_i|` of the nonzero entries.
pub fn log2_norm_from_log2s<I: IntoIterator<Item = f64>>(space: SpaceSpec, logs: I) -> f64 {
    let logs: Vec<f64> = logs.into_iter().collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return top;
    }
    match space.norm {
        NormKind::Sup => top,
        NormKind::Lp(p) => {
            let s: f64 = logs.iter().map(|a| (p * (a - top)).exp2()).sum();
            top + s.log2() / p
        }
    }
}

impl ShiftOperator {
    pub fn new(weights: WeightSequence, space: SpaceSpec) -> Self {
        ShiftOperator { weights, space }
    }

    /// `c·B`, the constant-weight shift.
    pub fn rolewicz(c: f64, space: SpaceSpec) -> Result<Self> {
        Ok(Self::new(WeightSequence::constant(c)?, space))
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    pub fn space(&self) -> SpaceSpec {
        self.space
    }

    fn check_space(&self, v: &SparseVec) -> Result<()> {
        if v.space() != self.space {
            return Err(Error::SpaceMismatch {
                left: self.space.to_string(),
                right: v.space().to_string(),
            });
        }
        Ok(())
    }

    /// `B_w^n v`: `(B^n v)_m = w_{m+1}···w_{m+n} · v_{m+n}`.
    pub fn apply_backward(&self, v: &SparseVec, n: u64) -> Result<SparseVec> {
        self.check_space(v)?;
        if n == 0 {
            return Ok(v.clone());
        }
        let shift = n as i64;
        let entries = v.iter().filter_map(|(i, x)| {
            let m = i - shift;
            if m < 0 && !self.space.is_bilateral() {
                return None;
            }
            Some((m, x * self.weights.range_product(m, n)))
        });
        SparseVec::from_entries(self.space, entries)
    }

    /// `S^n v`: `(S^n v)_{m+n} = v_m / (w_{m+1}···w_{m+n})`.
    pub fn apply_right_inverse(&self, v: &SparseVec, n: u64) -> Result<SparseVec> {
        self.check_space(v)?;
        if n == 0 {
            return Ok(v.clone());
        }
        let shift = n as i64;
        let mut entries = Vec::with_capacity(v.len());
        for (m, x) in v.iter() {
            if let Some(k) = self.weights.first_zero(m + 1, m + shift) {
                return Err(Error::ZeroWeight { index: k });
            }
            let lg = self.weights.range_log2(m, n);
            let y = if lg.abs() < 1000.0 {
                x / self.weights.range_product(m, n)
            } else {
                self.weights.product_sign(m, m + shift) * x * (-lg).exp2()
            };
            entries.push((m + shift, y));
        }
        SparseVec::from_entries(self.space, entries)
    }

    /// `log2 ‖S^n v‖`, exact in the log domain even when the entries of
    /// `S^n v` underflow.
    pub fn log2_norm_right_inverse(&self, v: &SparseVec, n: u64) -> f64 {
        log2_norm_from_log2s(
            self.space,
            v.iter()
                .map(|(m, x)| x.abs().log2() - self.weights.range_log2(m, n)),
        )
    }

    /// `log2 ‖B^n v‖`.
    pub fn log2_norm_backward(&self, v: &SparseVec, n: u64) -> f64 {
        let shift = n as i64;
        log2_norm_from_log2s(
            self.space,
            v.iter()
                .filter(|(i, _)| self.space.is_bilateral() || *i >= shift)
                .map(|(i, x)| x.abs().log2() + self.weights.range_log2(i - shift, n)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(k: i64) -> SparseVec {
        SparseVec::basis(SpaceSpec::l2(), k).unwrap()
    }

    #[test]
    fn backward_examples() {
        let t = ShiftOperator::rolewicz(2.0, SpaceSpec::l2()).unwrap();
        assert_eq!(t.apply_backward(&e(5), 5).unwrap(), e(0).scale(32.0));
        assert!(t.apply_backward(&e(0), 1).unwrap().is_zero());
        let c = ShiftOperator::new(WeightSequence::counterexample(), SpaceSpec::l2());
        assert_eq!(c.apply_backward(&e(101), 101).unwrap(), e(0).scale(8.0));
    }

    #[test]
    fn right_inverse_examples() {
        let t = ShiftOperator::rolewicz(2.0, SpaceSpec::l2()).unwrap();
        assert_eq!(t.apply_right_inverse(&e(0), 3).unwrap(), e(3).scale(0.125));
        let v = SparseVec::from_entries(SpaceSpec::l2(), [(0, 1.5), (4, -2.0)]).unwrap();
        assert_eq!(t.apply_right_inverse(&v, 0).unwrap(), v);
        let z = ShiftOperator::new(
            WeightSequence::table([(3, 0.0)]).unwrap(),
            SpaceSpec::l2(),
        );
        assert_eq!(
            z.apply_right_inverse(&e(1), 5).unwrap_err(),
            Error::ZeroWeight { index: 3 }
        );
    }

    #[test]
    fn log_norms_survive_underflow() {
        let t = ShiftOperator::rolewicz(2.0, SpaceSpec::l2()).unwrap();
        let v = SparseVec::from_entries(SpaceSpec::l2(), [(0, 1.0), (1, 1.0)]).unwrap();
        let lg = t.log2_norm_right_inverse(&v, 5000);
        // entries 2^-5000 and 2^-5000 at different places
        assert!((lg - (-5000.0 + 0.5)).abs() < 1e-9);
        assert!(t.apply_right_inverse(&v, 5000).unwrap().is_zero());
        let small = t.log2_norm_right_inverse(&v, 3);
        let direct = t.apply_right_inverse(&v, 3).unwrap().norm().log2();
        assert!((small - direct).abs() < 1e-12);
    }

    #[test]
    fn bilateral_keeps_negative_indices() {
        let s = SpaceSpec::l2().bilateral();
        let t = ShiftOperator::rolewicz(2.0, s).unwrap();
        let v = SparseVec::basis(s, 0).unwrap();
        let b = t.apply_backward(&v, 3).unwrap();
        assert_eq!(b.get(-3), 8.0);
    }
}
