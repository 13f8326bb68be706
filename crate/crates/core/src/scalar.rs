//! Numeric backends for probability weights.
//!
//! Two backends implement [`Scalar`]: exact rationals ([`Rational`], the
//! ground truth for all structural checks) and `f64` (for long runs where
//! rational denominators grow too large — they double in size under each
//! squaring step).

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::Value;

/// Exact rational weight type.
pub type Rational = num_rational::BigRational;

/// Arithmetic and codec surface a weight type must provide.
pub trait Scalar:
    Clone + PartialEq + PartialOrd + Debug + Display + Send + Sync + 'static
{
    /// Whether arithmetic is exact (`==` comparisons are meaningful).
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(numerator: u64, denominator: u64) -> Self;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn abs(&self) -> Self;

    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;

    /// Support membership: exact positivity for exact backends, a strict
    /// threshold comparison for floating point.
    fn in_support(&self, threshold: f64) -> bool;

    /// Bit size of the denominator, used by the rational blowup guard.
    /// Always 0 for floating point.
    fn denominator_bits(&self) -> u64;

    fn from_json(value: &Value) -> Option<Self>;
    fn to_json(&self) -> Value;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_ratio(numerator: u64, denominator: u64) -> Self {
        numerator as f64 / denominator as f64
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn div(&self, other: &Self) -> Self {
        self / other
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn in_support(&self, threshold: f64) -> bool {
        *self > threshold
    }

    fn denominator_bits(&self) -> u64 {
        0
    }

    fn from_json(value: &Value) -> Option<Self> {
        match value {
            Value::Number(n) => n.as_f64(),
            Value::String(s) => {
                if let Some((num, den)) = s.split_once('/') {
                    let n: f64 = num.trim().parse().ok()?;
                    let d: f64 = den.trim().parse().ok()?;
                    if d == 0.0 {
                        return None;
                    }
                    Some(n / d)
                } else {
                    s.trim().parse().ok()
                }
            }
            _ => None,
        }
    }

    fn to_json(&self) -> Value {
        Value::from(*self)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        <Rational as Zero>::zero()
    }

    fn one() -> Self {
        <Rational as num_traits::One>::one()
    }

    fn from_ratio(numerator: u64, denominator: u64) -> Self {
        Rational::new(BigInt::from(numerator), BigInt::from(denominator))
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn div(&self, other: &Self) -> Self {
        self / other
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(0.0)
    }

    fn in_support(&self, _threshold: f64) -> bool {
        self.is_positive()
    }

    fn denominator_bits(&self) -> u64 {
        self.denom().bits()
    }

    fn from_json(value: &Value) -> Option<Self> {
        match value {
            // Integer JSON numbers convert exactly; other numbers go through
            // their shortest decimal form so "0.1" means 1/10, not the f64 bit
            // pattern nearest to it.
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Some(Rational::from(BigInt::from(i)))
                } else if let Some(u) = n.as_u64() {
                    Some(Rational::from(BigInt::from(u)))
                } else {
                    parse_rational_literal(&n.to_string())
                }
            }
            Value::String(s) => parse_rational_literal(s),
            _ => None,
        }
    }

    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

/// Parses "p/q", integers, and decimal literals (with optional exponent)
/// into exact rationals.
pub fn parse_rational_literal(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "-" || digits == "+" {
        return None;
    }
    let scale = exp.checked_sub(frac_part.len() as i64)?;
    if scale.unsigned_abs() > 16_384 {
        return None;
    }
    let base: BigInt = digits.parse().ok()?;
    let ten_pow = BigInt::from(10u32).pow(scale.unsigned_abs() as u32);
    Some(if scale >= 0 {
        Rational::from(base * ten_pow)
    } else {
        Rational::new(base, ten_pow)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_literals() {
        assert_eq!(
            parse_rational_literal("1/3").unwrap(),
            Rational::from_ratio(1, 3)
        );
        assert_eq!(
            parse_rational_literal("0.25").unwrap(),
            Rational::from_ratio(1, 4)
        );
        assert_eq!(
            parse_rational_literal("0.1").unwrap(),
            Rational::from_ratio(1, 10)
        );
        assert_eq!(parse_rational_literal("7").unwrap(), Rational::from_ratio(7, 1));
        assert_eq!(
            parse_rational_literal("2.5e-1").unwrap(),
            Rational::from_ratio(1, 4)
        );
        assert_eq!(
            parse_rational_literal("-3/6").unwrap(),
            -Rational::from_ratio(1, 2)
        );
        assert!(parse_rational_literal("1/0").is_none());
        assert!(parse_rational_literal("abc").is_none());
    }

    #[test]
    fn json_roundtrip_rational() {
        let w = Rational::from_ratio(11, 24);
        let v = w.to_json();
        assert_eq!(v, Value::String("11/24".into()));
        assert_eq!(Rational::from_json(&v).unwrap(), w);
        // JSON number 0.1 decodes as the exact decimal 1/10.
        let v: Value = serde_json::from_str("0.1").unwrap();
        assert_eq!(Rational::from_json(&v).unwrap(), Rational::from_ratio(1, 10));
    }

    #[test]
    fn json_roundtrip_float() {
        let v = 0.3f64.to_json();
        assert_eq!(f64::from_json(&v).unwrap(), 0.3);
        let frac: Value = Value::String("1/4".into());
        assert_eq!(f64::from_json(&frac).unwrap(), 0.25);
    }

    #[test]
    fn denominator_bits_guard_input() {
        assert_eq!(Rational::from_ratio(1, 1024).denominator_bits(), 11);
        assert_eq!(1.0f64.denominator_bits(), 0);
    }
}
