//! Exact rational helpers: parsing, certified roots, and the `Certified` value type.

use std::cmp::Ordering;
use std::fmt;

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary precision rational used for every exact decision in the crate.
pub type Rational = BigRational;

/// Default number of fractional bits used when a certified bracket is needed.
pub const DEFAULT_PRECISION_BITS: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse {input:?} as an exact rational")]
pub struct ParseRationalError {
    pub input: String,
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p/q`, an integer, or a finite decimal such as `-1.25`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError { input: s.to_string() };
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let digits = whole.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit()) || frac.is_empty() {
            return Err(err());
        }
        let whole: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| err())?
        };
        let frac_int: BigInt = frac.parse().map_err(|_| err())?;
        let scale = num::pow(BigInt::from(10), frac.len());
        let magnitude = Rational::new(whole * &scale + frac_int, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let n: BigInt = t.parse().map_err(|_| err())?;
    Ok(Rational::from_integer(n))
}

/// Renders `p/q`, or `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Very large numerators/denominators: fall back on a scaled quotient.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Exact conversion of a finite `f64` into a rational.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

fn exact_nth_root_int(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.nth_root(k);
    if num::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact `k`-th root of a nonnegative rational when one exists.
pub fn exact_nth_root(x: &Rational, k: u32) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = exact_nth_root_int(x.numer(), k)?;
    let d = exact_nth_root_int(x.denom(), k)?;
    Some(Rational::new(n, d))
}

/// A value known exactly, or enclosed in a closed rational bracket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certified {
    Exact(Rational),
    Bracket { lo: Rational, hi: Rational },
}

impl Certified {
    pub fn lo(&self) -> &Rational {
        match self {
            Certified::Exact(r) => r,
            Certified::Bracket { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &Rational {
        match self {
            Certified::Exact(r) => r,
            Certified::Bracket { hi, .. } => hi,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Certified::Exact(r) => Some(r),
            Certified::Bracket { .. } => None,
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        (to_f64(self.lo()) + to_f64(self.hi())) / 2.0
    }

    /// Certified comparison against an exact rational; `None` if the bracket straddles it.
    pub fn compare(&self, other: &Rational) -> Option<Ordering> {
        match self {
            Certified::Exact(r) => Some(r.cmp(other)),
            Certified::Bracket { lo, hi } => {
                if lo > other {
                    Some(Ordering::Greater)
                } else if hi < other {
                    Some(Ordering::Less)
                } else {
                    None
                }
            }
        }
    }

    pub fn add(&self, r: &Rational) -> Certified {
        match self {
            Certified::Exact(x) => Certified::Exact(x + r),
            Certified::Bracket { lo, hi } => Certified::Bracket { lo: lo + r, hi: hi + r },
        }
    }

    pub fn neg(&self) -> Certified {
        match self {
            Certified::Exact(x) => Certified::Exact(-x),
            Certified::Bracket { lo, hi } => Certified::Bracket { lo: -hi, hi: -lo },
        }
    }
}

impl fmt::Display for Certified {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certified::Exact(r) => write!(f, "{r}"),
            Certified::Bracket { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}

impl Serialize for Certified {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(rename_all = "camelCase")]
        struct Repr {
            exact: Option<String>,
            lo: String,
            hi: String,
            approx: f64,
        }
        Repr {
            exact: self.exact().map(format_rational),
            lo: format_rational(self.lo()),
            hi: format_rational(self.hi()),
            approx: self.midpoint_f64(),
        }
        .serialize(serializer)
    }
}

/// Certified `k`-th root of a nonnegative rational, exact when possible, otherwise
/// a dyadic bracket of width `2^-bits`.
pub fn nth_root(x: &Rational, k: u32, bits: u32) -> Certified {
    assert!(!x.is_negative(), "root of a negative rational");
    assert!(k >= 1);
    if let Some(r) = exact_nth_root(x, k) {
        return Certified::Exact(r);
    }
    // floor((x * 2^(k*bits))^(1/k)) / 2^bits
    let scale = BigInt::one() << (k as usize * bits as usize);
    let scaled = (x.numer() * scale) / x.denom();
    let s = scaled.nth_root(k);
    let denom = BigInt::one() << bits as usize;
    Certified::Bracket {
        lo: Rational::new(s.clone(), denom.clone()),
        hi: Rational::new(s + 1, denom),
    }
}

pub fn sqrt(x: &Rational, bits: u32) -> Certified {
    nth_root(x, 2, bits)
}

/// Rational approximation of `x` rounded to a dyadic grid of spacing `2^-bits`.
pub fn round_dyadic(x: f64, bits: u32) -> Rational {
    let scale = (bits as f64).exp2();
    let n = (x * scale).round();
    Rational::new(
        BigInt::from(n as i128),
        BigInt::one() << bits as usize,
    )
}

/// Serde adapter: a rational as its `p/q` string.
pub mod as_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = RationalInput::deserialize(d)?;
        s.into_rational().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod vec_as_strings {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(format_rational).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<RationalInput>::deserialize(d)?;
        raw.into_iter()
            .map(|r| r.into_rational().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Accepts either a `"p/q"` string or a JSON integer.
#[derive(Deserialize)]
#[serde(untagged)]
enum RationalInput {
    Text(String),
    Int(i64),
}

impl RationalInput {
    fn into_rational(self) -> Result<Rational, ParseRationalError> {
        match self {
            RationalInput::Text(s) => parse_rational(&s),
            RationalInput::Int(n) => Ok(int(n)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(parse_rational("1.5").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), ratio(-1, 4));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn formats_round_trip() {
        for s in ["1/2", "-3", "0", "22/7"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
    }

    #[test]
    fn exact_roots_are_detected() {
        assert_eq!(nth_root(&ratio(9, 4), 2, 32), Certified::Exact(ratio(3, 2)));
        assert_eq!(nth_root(&ratio(1, 27), 3, 32), Certified::Exact(ratio(1, 3)));
    }

    #[test]
    fn irrational_roots_are_bracketed() {
        let c = sqrt(&int(2), 40);
        let (lo, hi) = (c.lo().clone(), c.hi().clone());
        assert!(&lo * &lo < int(2));
        assert!(&hi * &hi > int(2));
        assert_eq!(&hi - &lo, Rational::new(BigInt::one(), BigInt::one() << 40));
        assert!((c.midpoint_f64() - 2f64.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn certified_compare_refuses_straddles() {
        let c = sqrt(&int(2), 10);
        assert_eq!(c.compare(&int(1)), Some(Ordering::Greater));
        assert_eq!(c.compare(&int(2)), Some(Ordering::Less));
        assert_eq!(c.compare(c.lo()), None);
    }
}
