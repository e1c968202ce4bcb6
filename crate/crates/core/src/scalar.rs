//! Scalar fields used by the exterior-algebra engine.
//!
//! Two modes exist: exact rationals ([`Rational`]) for combinatorial
//! identities, and `f64` for everything iterative.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// A field usable as form coefficients and matrix entries.
pub trait Scalar:
    nalgebra::Scalar
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    /// Whether arithmetic in this field is exact.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn to_f64(&self) -> f64;

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    /// Zero test: exact equality in exact mode, `|x| <= tol` otherwise.
    fn negligible(&self, tol: f64) -> bool;

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self>;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("not a float: {n}"))),
            Value::String(s) => parse_rational(s).map(|q| Scalar::to_f64(&q)),
            other => Err(Error::Parse(format!("expected a number, found {other}"))),
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn magnitude(&self) -> f64 {
        Scalar::to_f64(&self.abs())
    }

    fn negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => n
                .as_i64()
                .map(<Rational as Scalar>::from_i64)
                .ok_or_else(|| Error::Parse(format!("exact mode needs integers or \"p/q\" strings, found {n}"))),
            other => Err(Error::Parse(format!("expected a rational, found {other}"))),
        }
    }
}

/// Formats as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("malformed rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Integer factorial as a scalar.
pub fn factorial<S: Scalar>(k: usize) -> S {
    (1..=k as i64).fold(S::one(), |acc, i| acc * S::from_i64(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        let q = <Rational as Scalar>::from_ratio(-6, 4);
        assert_eq!(format_rational(&q), "-3/2");
        assert_eq!(parse_rational("-3/2").unwrap(), q);
        assert_eq!(parse_rational("5").unwrap(), <Rational as Scalar>::from_i64(5));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn factorial_small() {
        assert_eq!(factorial::<f64>(0), 1.0);
        assert_eq!(factorial::<f64>(5), 120.0);
        assert_eq!(factorial::<Rational>(4), <Rational as Scalar>::from_i64(24));
    }
}
