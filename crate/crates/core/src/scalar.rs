//! Scalar types that can serve as torus coordinates.
//!
//! Coordinates are either exact rationals (arbitrary precision) or binary
//! floats. Everything in [`crate::torus`] is written once against
//! [`TorusScalar`]; the concrete point types are the aliases at the crate
//! root.

use std::fmt::Debug;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Float, Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait TorusScalar: Clone + Debug + PartialOrd + Num + Signed + ToPrimitive + Send + Sync + 'static {
    /// True when arithmetic on this type is exact.
    const EXACT: bool;

    /// Largest integer not exceeding `self`.
    fn floor_value(&self) -> Self;

    /// `num/den` as a scalar; `den > 0`.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Fractional part of `c * self`, in `[0, 1)`.
    fn scale_mod1(&self, c: &BigInt) -> Self;

    /// Equality used for distinctness: exact for rationals, bitwise for floats.
    fn coord_eq(&self, other: &Self) -> bool;

    fn hash_coord<H: Hasher>(&self, state: &mut H);

    fn to_coord_string(&self) -> String;

    fn parse_coord(s: &str) -> Result<Self>;

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Reduction modulo 1 into `[0, 1)`.
    fn frac(&self) -> Self {
        let r = self.clone() - self.floor_value();
        // floats can round up to exactly 1 for tiny negative inputs
        if r >= Self::one() {
            Self::zero()
        } else {
            r
        }
    }

    /// Wraparound distance between two reduced coordinates.
    fn wrap_distance(&self, other: &Self) -> Self {
        let d = (self.clone() - other.clone()).abs();
        let e = Self::one() - d.clone();
        if e < d {
            e
        } else {
            d
        }
    }
}

impl TorusScalar for BigRational {
    const EXACT: bool = true;

    fn floor_value(&self) -> Self {
        self.floor()
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn scale_mod1(&self, c: &BigInt) -> Self {
        let den = self.denom();
        let num = (c.mod_floor(den) * self.numer()).mod_floor(den);
        BigRational::new(num, den.clone())
    }

    fn coord_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn hash_coord<H: Hasher>(&self, state: &mut H) {
        self.hash(state);
    }

    fn to_coord_string(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn parse_coord(s: &str) -> Result<Self> {
        parse_rational(s)
    }
}

macro_rules! impl_float_scalar {
    ($f:ty) => {
        impl TorusScalar for $f {
            const EXACT: bool = false;

            fn floor_value(&self) -> Self {
                Float::floor(*self)
            }

            fn from_ratio(num: i64, den: i64) -> Self {
                (num as f64 / den as f64) as $f
            }

            fn scale_mod1(&self, c: &BigInt) -> Self {
                // approximate: the product loses precision once |c| is large
                let c = c.to_f64().unwrap_or(0.0);
                TorusScalar::frac(&((c * (*self as f64)) as $f))
            }

            fn coord_eq(&self, other: &Self) -> bool {
                self.to_bits() == other.to_bits()
            }

            fn hash_coord<H: Hasher>(&self, state: &mut H) {
                self.to_bits().hash(state);
            }

            fn to_coord_string(&self) -> String {
                format!("{}", self)
            }

            fn parse_coord(s: &str) -> Result<Self> {
                let s = s.trim();
                if s.contains('/') {
                    let q = parse_rational(s)?;
                    return Ok(q.to_f64().unwrap_or(f64::NAN) as $f);
                }
                let v = <$f>::from_str(s).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
                if !v.is_finite() {
                    return Err(Error::Parse(format!("`{s}` is not finite")));
                }
                Ok(v)
            }
        }
    };
}

impl_float_scalar!(f32);
impl_float_scalar!(f64);

/// Parses `"a/b"`, `"a"` or a plain decimal such as `"-0.125"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("`{s}`: zero denominator")));
        }
        return Ok(BigRational::new(n, d));
    }
    parse_decimal(s)
}

/// Exact value of a decimal literal (optional sign, digits, optional fraction).
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(Error::Parse(format!("`{s}` is not a number")));
    }
    let digits = format!("{int_part}{frac_part}");
    let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
        .map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let q = BigRational::new(num, den);
    Ok(if neg { -q } else { q })
}

/// Count of significant decimal digits in a decimal literal.
pub(crate) fn decimal_digits(s: &str) -> usize {
    s.chars()
        .filter(|c| c.is_ascii_digit())
        .skip_while(|&c| c == '0')
        .count()
}
