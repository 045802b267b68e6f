//! Serializable set descriptions.
//!
//! Text format: a header line `<kind-tag> [<name>] [key=value ...]`
//! followed, for explicit lists, by one decimal member per line and, for
//! interval unions, by one `start end` pair per line.
//!
//! Short forms used on command lines: `evens`, `odds`, `multiples:M`,
//! `periodic:P:R1,R2[:START]`, `factorial`, `powers:B`, `squares`,
//! `prime-powers:P:SCALE`, `prescribed:R1:R2:R3:R4`, `s-set`, `e-set:J`,
//! `d-set:J`, `list:A,B,C`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::Ratio;

use super::{
    make_prescribed_density_set, ExplicitSet, FactorialBlocks, IntervalUnion, PeriodicSet,
    PowerSet, PrimePowerSet, SetKind, SharedSet, SquareSet,
};
use crate::counterexample_c0::{DSet, ESet, SSet};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetSpec {
    Explicit(Vec<BigUint>),
    Periodic {
        period: u64,
        residues: Vec<u64>,
        start: u64,
    },
    Intervals(Vec<(BigUint, BigUint)>),
    Factorial,
    Powers {
        base: u64,
    },
    Squares,
    PrimePowers {
        prime: u64,
        scale: u64,
    },
    Prescribed([Ratio<u64>; 4]),
    /// The counterexample set `S`.
    SSet,
    ESet {
        j: u64,
    },
    DSet {
        j: u64,
    },
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn num<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| perr(format!("bad {what}: {s:?}")))
}

fn ratio(s: &str) -> Result<Ratio<u64>> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: u64 = num(d, "denominator")?;
            if d == 0 {
                return Err(perr("zero denominator"));
            }
            Ok(Ratio::new(num(n, "numerator")?, d))
        }
        None => Ok(Ratio::from_integer(num(s, "rational")?)),
    }
}

fn list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| num(t, what))
        .collect()
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl SetSpec {
    pub fn kind(&self) -> SetKind {
        match self {
            SetSpec::Explicit(_) => SetKind::ExplicitList,
            SetSpec::Periodic { .. } => SetKind::Periodic,
            SetSpec::Intervals(_) | SetSpec::Factorial | SetSpec::Prescribed(_) => {
                SetKind::IntervalUnion
            }
            SetSpec::Powers { .. }
            | SetSpec::Squares
            | SetSpec::PrimePowers { .. }
            | SetSpec::SSet
            | SetSpec::ESet { .. }
            | SetSpec::DSet { .. } => SetKind::Derived,
        }
    }

    /// Parses a short form.
    pub fn parse_short(s: &str) -> Result<SetSpec> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let arg = |i: usize| {
            parts
                .get(i)
                .copied()
                .ok_or_else(|| perr(format!("{s:?}: missing field {i}")))
        };
        let spec = match parts[0] {
            "evens" => SetSpec::Periodic {
                period: 2,
                residues: vec![0],
                start: 0,
            },
            "odds" => SetSpec::Periodic {
                period: 2,
                residues: vec![1],
                start: 0,
            },
            "all" => SetSpec::Periodic {
                period: 1,
                residues: vec![0],
                start: 0,
            },
            "multiples" => SetSpec::Periodic {
                period: num(arg(1)?, "modulus")?,
                residues: vec![0],
                start: 0,
            },
            "periodic" => SetSpec::Periodic {
                period: num(arg(1)?, "period")?,
                residues: list(arg(2)?, "residue")?,
                start: match parts.get(3) {
                    Some(t) => num(t, "start")?,
                    None => 0,
                },
            },
            "factorial" => SetSpec::Factorial,
            "powers" => SetSpec::Powers {
                base: num(arg(1)?, "base")?,
            },
            "squares" => SetSpec::Squares,
            "prime-powers" => SetSpec::PrimePowers {
                prime: num(arg(1)?, "prime")?,
                scale: match parts.get(2) {
                    Some(t) => num(t, "scale")?,
                    None => 1,
                },
            },
            "prescribed" => SetSpec::Prescribed([
                ratio(arg(1)?)?,
                ratio(arg(2)?)?,
                ratio(arg(3)?)?,
                ratio(arg(4)?)?,
            ]),
            "s-set" => SetSpec::SSet,
            "e-set" => SetSpec::ESet {
                j: num(arg(1)?, "j")?,
            },
            "d-set" => SetSpec::DSet {
                j: num(arg(1)?, "j")?,
            },
            "list" => {
                let mut v: Vec<BigUint> = list(arg(1)?, "member")?;
                v.sort();
                v.dedup();
                SetSpec::Explicit(v)
            }
            other => return Err(perr(format!("unknown set {other:?}"))),
        };
        Ok(spec)
    }

    /// Full text serialization.
    pub fn to_text(&self) -> String {
        let tag = self.kind().tag();
        match self {
            SetSpec::Explicit(v) => {
                let mut out = format!("{tag}\n");
                for m in v {
                    out.push_str(&format!("{m}\n"));
                }
                out
            }
            SetSpec::Intervals(v) => {
                let mut out = format!("{tag}\n");
                for (a, b) in v {
                    out.push_str(&format!("{a} {b}\n"));
                }
                out
            }
            SetSpec::Periodic {
                period,
                residues,
                start,
            } => format!(
                "{tag} period={period} residues={} start={start}\n",
                join(residues)
            ),
            SetSpec::Factorial => format!("{tag} factorial\n"),
            SetSpec::Powers { base } => format!("{tag} powers base={base}\n"),
            SetSpec::Squares => format!("{tag} squares\n"),
            SetSpec::PrimePowers { prime, scale } => {
                format!("{tag} prime-powers prime={prime} scale={scale}\n")
            }
            SetSpec::Prescribed(r) => format!("{tag} prescribed targets={}\n", join(r)),
            SetSpec::SSet => format!("{tag} s-set\n"),
            SetSpec::ESet { j } => format!("{tag} e-set j={j}\n"),
            SetSpec::DSet { j } => format!("{tag} d-set j={j}\n"),
        }
    }

    pub fn from_text(text: &str) -> Result<SetSpec> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| perr("empty set description"))?;
        let mut tokens = header.split_whitespace();
        let tag = tokens.next().expect("non-empty line");
        let mut name = None;
        let mut kv = std::collections::BTreeMap::new();
        for t in tokens {
            match t.split_once('=') {
                Some((k, v)) => {
                    kv.insert(k, v);
                }
                None if name.is_none() => name = Some(t),
                None => return Err(perr(format!("unexpected token {t:?}"))),
            }
        }
        let get = |k: &str| {
            kv.get(k)
                .copied()
                .ok_or_else(|| perr(format!("missing {k}= in header {header:?}")))
        };
        let spec = match (tag, name) {
            ("explicit-list", None) => {
                let mut v: Vec<BigUint> = lines.map(|l| num(l, "member")).collect::<Result<_>>()?;
                v.sort();
                v.dedup();
                SetSpec::Explicit(v)
            }
            ("interval-union", None) => {
                let v = lines
                    .map(|l| {
                        let (a, b) = l
                            .split_once(char::is_whitespace)
                            .ok_or_else(|| perr(format!("bad interval line {l:?}")))?;
                        Ok((num(a, "start")?, num(b, "end")?))
                    })
                    .collect::<Result<_>>()?;
                SetSpec::Intervals(v)
            }
            ("periodic", None) => SetSpec::Periodic {
                period: num(get("period")?, "period")?,
                residues: list(get("residues")?, "residue")?,
                start: kv.get("start").map_or(Ok(0), |s| num(s, "start"))?,
            },
            ("interval-union", Some("factorial")) => SetSpec::Factorial,
            ("interval-union", Some("prescribed")) => {
                let r: Vec<Ratio<u64>> = get("targets")?
                    .split(',')
                    .map(ratio)
                    .collect::<Result<_>>()?;
                let r: [Ratio<u64>; 4] = r
                    .try_into()
                    .map_err(|_| perr("prescribed needs four targets"))?;
                SetSpec::Prescribed(r)
            }
            ("derived", Some("powers")) => SetSpec::Powers {
                base: num(get("base")?, "base")?,
            },
            ("derived", Some("squares")) => SetSpec::Squares,
            ("derived", Some("prime-powers")) => SetSpec::PrimePowers {
                prime: num(get("prime")?, "prime")?,
                scale: num(get("scale")?, "scale")?,
            },
            ("derived", Some("s-set")) => SetSpec::SSet,
            ("derived", Some("e-set")) => SetSpec::ESet {
                j: num(get("j")?, "j")?,
            },
            ("derived", Some("d-set")) => SetSpec::DSet {
                j: num(get("j")?, "j")?,
            },
            _ => return Err(perr(format!("unknown set header {header:?}"))),
        };
        Ok(spec)
    }

    pub fn build(&self) -> Result<SharedSet> {
        let set: SharedSet = match self {
            SetSpec::Explicit(v) => Arc::new(ExplicitSet::new(v.iter().cloned())),
            SetSpec::Periodic {
                period,
                residues,
                start,
            } => Arc::new(PeriodicSet::new(*period, residues, *start)?),
            SetSpec::Intervals(v) => Arc::new(IntervalUnion::new(v.iter().cloned())),
            SetSpec::Factorial => Arc::new(FactorialBlocks),
            SetSpec::Powers { base } => Arc::new(PowerSet::new(*base)?),
            SetSpec::Squares => Arc::new(SquareSet),
            SetSpec::PrimePowers { prime, scale } => Arc::new(PrimePowerSet::new(*prime, *scale)?),
            SetSpec::Prescribed([a, b, c, d]) => {
                Arc::new(make_prescribed_density_set(*a, *b, *c, *d)?)
            }
            SetSpec::SSet => Arc::new(SSet),
            SetSpec::ESet { j } => Arc::new(ESet::new(*j)?),
            SetSpec::DSet { j } => Arc::new(DSet::new(*j)?),
        };
        Ok(set)
    }
}

impl fmt::Display for SetSpec {
    /// Short form when one exists, else the header line of the text form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetSpec::Periodic {
                period,
                residues,
                start,
            } => write!(f, "periodic:{period}:{}:{start}", join(residues)),
            SetSpec::Factorial => f.write_str("factorial"),
            SetSpec::Powers { base } => write!(f, "powers:{base}"),
            SetSpec::Squares => f.write_str("squares"),
            SetSpec::PrimePowers { prime, scale } => write!(f, "prime-powers:{prime}:{scale}"),
            SetSpec::Prescribed([a, b, c, d]) => write!(f, "prescribed:{a}:{b}:{c}:{d}"),
            SetSpec::SSet => f.write_str("s-set"),
            SetSpec::ESet { j } => write!(f, "e-set:{j}"),
            SetSpec::DSet { j } => write!(f, "d-set:{j}"),
            SetSpec::Explicit(v) => write!(f, "list:{}", join(v)),
            SetSpec::Intervals(v) => write!(f, "interval-union[{} intervals]", v.len()),
        }
    }
}

impl FromStr for SetSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SetSpec::parse_short(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_forms() {
        assert_eq!(
            SetSpec::parse_short("multiples:3").unwrap(),
            SetSpec::Periodic {
                period: 3,
                residues: vec![0],
                start: 0
            }
        );
        let p = SetSpec::parse_short("prescribed:0:1/5:1/2:1").unwrap();
        assert_eq!(p.to_string(), "prescribed:0:1/5:1/2:1");
        assert!(SetSpec::parse_short("bogus").is_err());
        assert!(SetSpec::parse_short("powers").is_err());
    }

    #[test]
    fn text_round_trip() {
        let specs = vec![
            SetSpec::Explicit(vec![BigUint::from(3u32), BigUint::from(10u32).pow(40)]),
            SetSpec::Intervals(vec![(BigUint::from(1u32), BigUint::from(4u32))]),
            SetSpec::parse_short("periodic:7:1,3:5").unwrap(),
            SetSpec::Factorial,
            SetSpec::Powers { base: 3 },
            SetSpec::Squares,
            SetSpec::PrimePowers { prime: 5, scale: 2 },
            SetSpec::parse_short("prescribed:0:1/5:1/2:1").unwrap(),
            SetSpec::SSet,
            SetSpec::ESet { j: 31 },
            SetSpec::DSet { j: 2 },
        ];
        for s in specs {
            assert_eq!(SetSpec::from_text(&s.to_text()).unwrap(), s, "{}", s.to_text());
            let built = s.build().unwrap();
            assert_eq!(built.kind(), s.kind());
        }
    }
}
