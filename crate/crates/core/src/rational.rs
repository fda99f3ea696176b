//! Exact rational scalars and the extended non-negative value type.
//!
//! Every measure weight and field value in this crate is an arbitrary
//! precision rational; `+∞` is admitted as a field value (empty essential
//! infima, reciprocals of zero). The multiplication convention `0·∞ = 0`
//! is baked into [`ExtRat::mul`], matching the usual measure-theoretic
//! convention for integrands.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Rat = BigRational;

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Convenience constructor for small integers.
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parse a rational from the `num/den` (or plain integer) wire format.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num)
        .map_err(|e| Error::Parse(format!("bad rational numerator `{s}`: {e}")))?;
    let den = BigInt::from_str(den)
        .map_err(|e| Error::Parse(format!("bad rational denominator `{s}`: {e}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in rational `{s}`")));
    }
    Ok(Rat::new(num, den))
}

/// Canonical `num/den` rendering used in files and reports.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// A finite non-negative rational or `+∞`.
///
/// The derived order places every finite value below `Infinite`, and
/// compares finite values exactly.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtRat {
    Finite(Rat),
    Infinite,
}

impl ExtRat {
    pub fn zero() -> Self {
        ExtRat::Finite(Rat::zero())
    }

    pub fn from_int(n: i64) -> Self {
        ExtRat::Finite(rint(n))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtRat::Finite(r) if r.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRat::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRat::Infinite)
    }

    /// The finite part, if any.
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ExtRat::Finite(r) => Some(r),
            ExtRat::Infinite => None,
        }
    }

    pub fn abs(&self) -> ExtRat {
        match self {
            ExtRat::Finite(r) => ExtRat::Finite(r.abs()),
            ExtRat::Infinite => ExtRat::Infinite,
        }
    }

    pub fn add(&self, other: &ExtRat) -> ExtRat {
        match (self, other) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => ExtRat::Finite(a + b),
            _ => ExtRat::Infinite,
        }
    }

    /// Product with the `0·∞ = 0` convention.
    pub fn mul(&self, other: &ExtRat) -> ExtRat {
        if self.is_zero() || other.is_zero() {
            return ExtRat::zero();
        }
        match (self, other) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => ExtRat::Finite(a * b),
            _ => ExtRat::Infinite,
        }
    }

    pub fn mul_rat(&self, other: &Rat) -> ExtRat {
        self.mul(&ExtRat::Finite(other.clone()))
    }

    /// Reciprocal with `1/0 = ∞` and `1/∞ = 0`.
    pub fn recip(&self) -> ExtRat {
        match self {
            ExtRat::Infinite => ExtRat::zero(),
            ExtRat::Finite(r) if r.is_zero() => ExtRat::Infinite,
            ExtRat::Finite(r) => ExtRat::Finite(r.recip()),
        }
    }

    /// Quotient with the conventions `0/0 = 0`, `x/0 = ∞` for `x > 0`.
    pub fn div(&self, other: &ExtRat) -> ExtRat {
        self.mul(&other.recip())
    }

    pub fn min_with(&self, other: &ExtRat) -> ExtRat {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtRat::Finite(r) => rat_to_f64(r),
            ExtRat::Infinite => f64::INFINITY,
        }
    }

    /// Exact comparison against a plain rational.
    pub fn cmp_rat(&self, other: &Rat) -> Ordering {
        match self {
            ExtRat::Finite(r) => r.cmp(other),
            ExtRat::Infinite => Ordering::Greater,
        }
    }
}

impl From<Rat> for ExtRat {
    fn from(r: Rat) -> Self {
        ExtRat::Finite(r)
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Finite(r) => write!(f, "{}", format_rat(r)),
            ExtRat::Infinite => write!(f, "inf"),
        }
    }
}

/// Parse an extended rational: `inf` or the `num/den` format.
pub fn parse_ext(s: &str) -> Result<ExtRat> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t == "+inf" || t == "∞" {
        return Ok(ExtRat::Infinite);
    }
    Ok(ExtRat::Finite(parse_rat(t)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_times_infinity_is_zero() {
        assert!(ExtRat::zero().mul(&ExtRat::Infinite).is_zero());
        assert!(ExtRat::Infinite.mul(&ExtRat::zero()).is_zero());
    }

    #[test]
    fn reciprocal_conventions() {
        assert_eq!(ExtRat::zero().recip(), ExtRat::Infinite);
        assert_eq!(ExtRat::Infinite.recip(), ExtRat::zero());
        assert_eq!(ExtRat::from_int(4).recip(), ExtRat::Finite(rat(1, 4)));
    }

    #[test]
    fn div_conventions() {
        // 0/0 = 0 and x/0 = inf
        assert!(ExtRat::zero().div(&ExtRat::zero()).is_zero());
        assert_eq!(ExtRat::from_int(3).div(&ExtRat::zero()), ExtRat::Infinite);
    }

    #[test]
    fn ordering_puts_infinity_on_top() {
        assert!(ExtRat::Finite(rat(1000, 1)) < ExtRat::Infinite);
        assert!(ExtRat::Finite(rat(1, 3)) < ExtRat::Finite(rat(1, 2)));
    }

    #[test]
    fn parse_round_trip() {
        for s in ["3/4", "-2/5", "7/1", "0/1"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(parse_rat(&format_rat(&r)).unwrap(), r);
        }
        assert_eq!(parse_ext("inf").unwrap(), ExtRat::Infinite);
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }
}
