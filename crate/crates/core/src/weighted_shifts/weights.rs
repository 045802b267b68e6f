use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::counterexample_c0::{product_exponent_u64, run_lengths, weight_log2_u64};
use crate::error::{Error, Result};

/// How the weights are produced.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightKind {
    /// `w_k = c` for every `k`.
    Constant(f64),
    /// `w_k = ((k+1)/k)^{1/p}` for `k >= 1`, `1` for `k <= 0`.
    RatioPower(f64),
    /// The `c_0` counterexample weights for `k >= 1`, `1` for `k <= 0`.
    Counterexample,
    /// Explicit values; `1` outside the table.
    Table(BTreeMap<i64, f64>),
}

/// A bounded weight sequence with log-domain partial products
/// `L(n) = log2 |w_1···w_n|` (and `L(n) = -log2 |w_{n+1}···w_0|` for
/// `n < 0`, so that `log2 |w_{a+1}···w_b| = L(b) - L(a)` always).
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSequence {
    kind: WeightKind,
    /// Table only: `(index, L(index), negative weights up to index)` for
    /// every table key, to answer `L` by one lookup.
    prefix: Vec<(i64, f64, u64)>,
}

impl WeightSequence {
    pub fn constant(c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidArgument(format!("weight {c} is not finite")));
        }
        Ok(Self::from_kind(WeightKind::Constant(c)))
    }

    pub fn ratio_power(p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::InvalidArgument(format!("ratio-power needs p >= 1, got {p}")));
        }
        Ok(Self::from_kind(WeightKind::RatioPower(p)))
    }

    pub fn counterexample() -> Self {
        Self::from_kind(WeightKind::Counterexample)
    }

    pub fn table<I: IntoIterator<Item = (i64, f64)>>(values: I) -> Result<Self> {
        let map: BTreeMap<i64, f64> = values.into_iter().collect();
        if let Some((k, w)) = map.iter().find(|(_, w)| !w.is_finite()) {
            return Err(Error::InvalidArgument(format!("weight w_{k} = {w} is not finite")));
        }
        Ok(Self::from_kind(WeightKind::Table(map)))
    }

    fn from_kind(kind: WeightKind) -> Self {
        let prefix = match &kind {
            WeightKind::Table(map) => table_prefix(map),
            _ => Vec::new(),
        };
        WeightSequence { kind, prefix }
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn weight(&self, k: i64) -> f64 {
        match &self.kind {
            WeightKind::Constant(c) => *c,
            WeightKind::RatioPower(p) => {
                if k >= 1 {
                    ((k as f64 + 1.0) / k as f64).powf(1.0 / p)
                } else {
                    1.0
                }
            }
            WeightKind::Counterexample => {
                if k >= 1 {
                    2f64.powi(weight_log2_u64(k as u64) as i32)
                } else {
                    1.0
                }
            }
            WeightKind::Table(map) => map.get(&k).copied().unwrap_or(1.0),
        }
    }

    /// `sup_k |w_k|`.
    pub fn sup_bound(&self) -> f64 {
        match &self.kind {
            WeightKind::Constant(c) => c.abs(),
            WeightKind::RatioPower(p) => 2f64.powf(1.0 / p),
            WeightKind::Counterexample => 2.0,
            WeightKind::Table(map) => map.values().fold(1.0, |m, w| m.max(w.abs())),
        }
    }

    /// `inf_{k >= k0} |w_k|` over the eventual range `k >= 1`; `0` when
    /// the weights are not bounded below.
    pub fn inf_bound(&self) -> f64 {
        match &self.kind {
            WeightKind::Constant(c) => c.abs(),
            WeightKind::RatioPower(_) => 1.0,
            WeightKind::Counterexample => 0.0,
            WeightKind::Table(map) => map
                .range(1..)
                .map(|(_, w)| w.abs())
                .fold(1.0, f64::min),
        }
    }

    /// First `k ∈ [a, b]` with `w_k = 0`.
    pub fn first_zero(&self, a: i64, b: i64) -> Option<i64> {
        if a > b {
            return None;
        }
        match &self.kind {
            WeightKind::Constant(c) if *c == 0.0 => Some(a),
            WeightKind::Table(map) => map.range(a..=b).find(|(_, w)| **w == 0.0).map(|(k, _)| *k),
            _ => None,
        }
    }

    /// `log2 |w_k|`.
    pub fn weight_log2(&self, k: i64) -> f64 {
        match &self.kind {
            WeightKind::Counterexample if k >= 1 => weight_log2_u64(k as u64) as f64,
            _ => self.weight(k).abs().log2(),
        }
    }

    /// `L(n)` as an exact integer when every weight is a power of two.
    pub fn exact_log2_product(&self, n: i64) -> Option<i64> {
        match &self.kind {
            WeightKind::Counterexample => Some(if n >= 1 {
                product_exponent_u64(n as u64) as i64
            } else {
                0
            }),
            WeightKind::Constant(c) => {
                let e = c.abs().log2();
                (e.fract() == 0.0 && e.is_finite()).then(|| n * e as i64)
            }
            _ => None,
        }
    }

    /// `L(n)`.
    pub fn log2_product(&self, n: i64) -> f64 {
        match &self.kind {
            WeightKind::Constant(c) => n as f64 * c.abs().log2(),
            WeightKind::RatioPower(p) => {
                if n >= 1 {
                    (n as f64 + 1.0).log2() / p
                } else {
                    0.0
                }
            }
            WeightKind::Counterexample => {
                if n >= 1 {
                    product_exponent_u64(n as u64) as f64
                } else {
                    0.0
                }
            }
            WeightKind::Table(_) => self.table_lookup(n).0,
        }
    }

    /// `L(n)` for arbitrarily large `n` (counterexample weights only need
    /// `c(n)`, the other kinds use `f64` indices).
    pub fn log2_product_big(&self, n: &BigUint) -> f64 {
        match (&self.kind, u64::try_from(n)) {
            (_, Ok(small)) if small <= i64::MAX as u64 => self.log2_product(small as i64),
            (WeightKind::Counterexample, _) => {
                crate::counterexample_c0::product_exponent(n) as f64
            }
            (WeightKind::Constant(c), _) => n.to_f64().unwrap_or(f64::INFINITY) * c.abs().log2(),
            (WeightKind::RatioPower(p), _) => big_log2(&(n + 1u32)) / p,
            (WeightKind::Table(_), _) => self.table_lookup(i64::MAX).0,
        }
    }

    /// `L(n)` for `n = 0, 1, ..., horizon`.
    pub fn log2_products_to(&self, horizon: u64) -> Vec<f64> {
        match &self.kind {
            WeightKind::Counterexample => run_lengths(0, horizon).into_iter().map(|c| c as f64).collect(),
            _ => (0..=horizon as i64).map(|n| self.log2_product(n)).collect(),
        }
    }

    /// Sign of `w_{a+1}···w_b` for `a <= b`.
    pub fn product_sign(&self, a: i64, b: i64) -> f64 {
        let negatives = match &self.kind {
            WeightKind::Constant(c) if *c < 0.0 => (b - a) as u64,
            WeightKind::Table(_) => self.cumulative(b).1 - self.cumulative(a).1,
            _ => 0,
        };
        if negatives % 2 == 1 {
            -1.0
        } else {
            1.0
        }
    }

    /// `w_{m+1}···w_{m+n}` for `n >= 0`.
    pub fn range_product(&self, m: i64, n: u64) -> f64 {
        if n == 0 {
            return 1.0;
        }
        let b = m + n as i64;
        let sign = self.product_sign(m, b);
        if let (Some(hi), Some(lo)) = (self.exact_log2_product(b), self.exact_log2_product(m)) {
            return sign * 2f64.powi((hi - lo) as i32);
        }
        if n <= 64 {
            return (m + 1..=b).map(|k| self.weight(k)).product();
        }
        sign * (self.log2_product(b) - self.log2_product(m)).exp2()
    }

    /// `log2 |w_{m+1}···w_{m+n}|`.
    pub fn range_log2(&self, m: i64, n: u64) -> f64 {
        let b = m + n as i64;
        match (self.exact_log2_product(b), self.exact_log2_product(m)) {
            (Some(hi), Some(lo)) => (hi - lo) as f64,
            _ => self.log2_product(b) - self.log2_product(m),
        }
    }

    /// Running sums `(Σ log2|w_k|, #negative w_k)` over table keys `k <= n`.
    fn cumulative(&self, n: i64) -> (f64, u64) {
        match self.prefix.partition_point(|e| e.0 <= n) {
            0 => (0.0, 0),
            i => (self.prefix[i - 1].1, self.prefix[i - 1].2),
        }
    }

    /// `(L(n), sign count)`; `L(n) = G(n) - G(0)` for both signs of `n`.
    fn table_lookup(&self, n: i64) -> (f64, u64) {
        let (gn, sn) = self.cumulative(n);
        let (g0, s0) = self.cumulative(0);
        (gn - g0, sn.wrapping_sub(s0))
    }
}

/// `log2 n` for `n >= 1` from the leading 64 bits.
pub(crate) fn big_log2(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return n.to_f64().expect("fits").log2();
    }
    let top = (n >> (bits - 64)).to_f64().expect("64 bits");
    top.log2() + (bits - 64) as f64
}

/// Running sums over table keys in increasing order.
fn table_prefix(map: &BTreeMap<i64, f64>) -> Vec<(i64, f64, u64)> {
    let mut out = Vec::with_capacity(map.len());
    let (mut l, mut s) = (0.0, 0u64);
    for (&k, &w) in map {
        l += w.abs().log2();
        if w < 0.0 {
            s += 1;
        }
        out.push((k, l, s));
    }
    out
}

impl fmt::Display for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            WeightKind::Constant(c) => write!(f, "constant:{c}"),
            WeightKind::RatioPower(p) => write!(f, "ratio-power:{p}"),
            WeightKind::Counterexample => f.write_str("counterexample-c0"),
            WeightKind::Table(m) => write!(f, "table[{} entries]", m.len()),
        }
    }
}

/// Serializable weight description.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightSpec {
    Constant(f64),
    RatioPower(f64),
    Counterexample,
    Table(Vec<(i64, f64)>),
}

impl WeightSpec {
    /// `constant:C`, `ratio-power:P`, `counterexample-c0`.
    pub fn parse_short(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| -> Result<f64> {
            t.parse()
                .map_err(|_| Error::Parse(format!("bad number in weight spec {s:?}")))
        };
        if s == "counterexample-c0" {
            Ok(WeightSpec::Counterexample)
        } else if let Some(c) = s.strip_prefix("constant:") {
            Ok(WeightSpec::Constant(num(c)?))
        } else if let Some(p) = s.strip_prefix("ratio-power:") {
            Ok(WeightSpec::RatioPower(num(p)?))
        } else {
            Err(Error::Parse(format!("unknown weight spec {s:?}")))
        }
    }

    /// Header line with the tag, then `k w_k` lines for tables.
    pub fn to_text(&self) -> String {
        match self {
            WeightSpec::Constant(c) => format!("constant {c}\n"),
            WeightSpec::RatioPower(p) => format!("ratio-power {p}\n"),
            WeightSpec::Counterexample => "counterexample-c0\n".into(),
            WeightSpec::Table(v) => {
                let mut out = String::from("table\n");
                for (k, w) in v {
                    out.push_str(&format!("{k} {w:e}\n"));
                }
                out
            }
        }
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty weight spec".into()))?;
        let bad = |what: &str| Error::Parse(format!("bad {what} in weight spec"));
        let mut tokens = header.split_whitespace();
        match (tokens.next(), tokens.next()) {
            (Some("constant"), Some(c)) => Ok(WeightSpec::Constant(c.parse().map_err(|_| bad("constant"))?)),
            (Some("ratio-power"), Some(p)) => {
                Ok(WeightSpec::RatioPower(p.parse().map_err(|_| bad("exponent"))?))
            }
            (Some("counterexample-c0"), None) => Ok(WeightSpec::Counterexample),
            (Some("table"), None) => {
                let mut v = Vec::new();
                for l in lines {
                    let (k, w) = l.split_once(char::is_whitespace).ok_or_else(|| bad("table line"))?;
                    v.push((
                        k.parse().map_err(|_| bad("index"))?,
                        w.trim().parse().map_err(|_| bad("weight"))?,
                    ));
                }
                Ok(WeightSpec::Table(v))
            }
            _ => Err(Error::Parse(format!("unknown weight header {header:?}"))),
        }
    }

    pub fn build(&self) -> Result<WeightSequence> {
        match self {
            WeightSpec::Constant(c) => WeightSequence::constant(*c),
            WeightSpec::RatioPower(p) => WeightSequence::ratio_power(*p),
            WeightSpec::Counterexample => Ok(WeightSequence::counterexample()),
            WeightSpec::Table(v) => WeightSequence::table(v.iter().copied()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_product_is_one() {
        for w in [
            WeightSequence::constant(2.0).unwrap(),
            WeightSequence::ratio_power(2.0).unwrap(),
            WeightSequence::counterexample(),
            WeightSequence::table([(1, 3.0), (-2, 0.5)]).unwrap(),
        ] {
            assert_eq!(w.log2_product(0), 0.0, "{w}");
        }
    }

    #[test]
    fn table_products_match_direct() {
        let w = WeightSequence::table([(-3, 0.5), (-1, -4.0), (2, 3.0), (5, -2.0)]).unwrap();
        for a in -6i64..6 {
            for n in 0u64..8 {
                let direct: f64 = (a + 1..=a + n as i64).map(|k| w.weight(k)).product();
                let via_logs = w.product_sign(a, a + n as i64)
                    * (w.log2_product(a + n as i64) - w.log2_product(a)).exp2();
                assert!((direct - via_logs).abs() < 1e-12, "a={a} n={n}");
                assert!((direct - w.range_product(a, n)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn counterexample_products() {
        let w = WeightSequence::counterexample();
        assert_eq!(w.exact_log2_product(101), Some(3));
        assert_eq!(w.range_product(0, 101), 8.0);
        assert_eq!(w.log2_products_to(12)[10], 1.0);
    }

    #[test]
    fn ratio_power_closed_form() {
        let w = WeightSequence::ratio_power(2.0).unwrap();
        let direct: f64 = (1..=1000).map(|k| w.weight(k).log2()).sum();
        assert!((direct - w.log2_product(1000)).abs() < 1e-9);
    }

    #[test]
    fn spec_round_trip() {
        for s in [
            WeightSpec::Constant(2.0),
            WeightSpec::RatioPower(1.5),
            WeightSpec::Counterexample,
            WeightSpec::Table(vec![(-1, 0.5), (3, 2.0)]),
        ] {
            assert_eq!(WeightSpec::from_text(&s.to_text()).unwrap(), s);
        }
        assert_eq!(WeightSpec::parse_short("constant:2").unwrap(), WeightSpec::Constant(2.0));
    }
}
