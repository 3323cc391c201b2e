//! Numeric backends.
//!
//! Every geometric routine is generic over [`Field`], which is implemented for
//! exact rationals ([`Rational`]) and for `f64`. The [`Scalar`] enum carries a
//! value of either kind across API boundaries where the representation is only
//! known at runtime (parsed documents, quantities that may need an irrational
//! square root).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg;

pub type Rational = num::BigRational;

/// Absolute tolerance used for every residual check in floating mode.
pub const TOLERANCE: f64 = 1e-9;

pub trait Field:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True for arithmetic that never rounds.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn to_f64(&self) -> f64;

    /// Exactly zero (rational) or within [`TOLERANCE`] of zero (floating).
    fn is_negligible(&self) -> bool;

    fn is_strictly_positive(&self) -> bool {
        !self.is_negligible() && *self > Self::zero()
    }

    /// Square root when it is representable in this field.
    ///
    /// Rationals return `Some` only for perfect squares; floats return `Some`
    /// for every non-negative input.
    fn sqrt_exact(&self) -> Option<Self>;

    fn to_scalar(&self) -> Scalar;

    fn from_scalar(value: &Scalar) -> Self;

    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }

    /// Basis of the nullspace of a `rows × cols` matrix.
    fn nullspace(a: &linalg::Matrix<Self>, cols: usize) -> Vec<Vec<Self>> {
        linalg::nullspace(a, cols)
    }
}

impl Field for Rational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &n * &n == *self.numer() && &d * &d == *self.denom() {
            Some(Rational::new(n, d))
        } else {
            None
        }
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::Exact(self.clone())
    }

    fn nullspace(a: &linalg::Matrix<Self>, cols: usize) -> Vec<Vec<Self>> {
        linalg::nullspace_exact(a, cols)
    }

    fn from_scalar(value: &Scalar) -> Self {
        match value {
            Scalar::Exact(r) => r.clone(),
            Scalar::Float(x) => Rational::from_f64(*x).unwrap_or_else(Rational::zero),
        }
    }
}

impl Field for f64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self) -> bool {
        self.abs() <= TOLERANCE
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if *self < 0.0 {
            None
        } else {
            Some(self.sqrt())
        }
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::Float(*self)
    }

    fn from_scalar(value: &Scalar) -> Self {
        value.to_f64()
    }
}

/// A number that is either an exact rational or a double.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => Field::to_f64(r),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    /// Equal exactly when both sides are exact, otherwise within [`TOLERANCE`].
    pub fn agrees_with(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => (self.to_f64() - other.to_f64()).abs() <= TOLERANCE,
        }
    }

    /// Renders floats with `digits` significant digits; rationals as `p/q`.
    pub fn format(&self, digits: usize) -> String {
        match self {
            Scalar::Exact(r) => r.to_string(),
            Scalar::Float(x) => format_significant(*x, digits),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Rounds `x` to `digits` significant digits.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let digits = digits.max(1);
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

fn format_significant(x: f64, digits: usize) -> String {
    let rounded = round_significant(x, digits);
    format!("{rounded}")
}

/// Parses an exact rational literal: an integer or `p/q`.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let text = text.trim();
    let bad = || Error::Parse(format!("`{text}` is not a rational of the form p or p/q"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("`{text}` has a zero denominator")));
            }
            Ok(Rational::new(n, d))
        }
        None => BigInt::from_str(text).map(Rational::from_integer).map_err(|_| bad()),
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Integers and `p/q` parse exactly; anything that parses as a decimal
    /// float becomes a floating value.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        if let Ok(r) = parse_rational(text) {
            return Ok(Scalar::Exact(r));
        }
        text.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(Scalar::Float)
            .ok_or_else(|| Error::Parse(format!("`{}` is neither a rational nor a decimal", text.trim())))
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => serializer.serialize_str(&r.to_string()),
            Scalar::Float(x) => serializer.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Integer(i64),
            Number(f64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Integer(n) => Ok(Scalar::Exact(<Rational as Field>::from_i64(n))),
            Raw::Number(x) => Ok(Scalar::Float(x)),
        }
    }
}
