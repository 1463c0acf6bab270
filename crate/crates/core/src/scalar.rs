//! Numeric backends.
//!
//! Two value types implement [`Scalar`]: [`Exact`] (arbitrary-precision
//! rationals) for identity checks at small sizes, and `f64` with compensated
//! summation for large sweeps. Every algorithm in the crate is generic over
//! the backend.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Exact = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueKind {
    Exact,
    Floating,
}

impl Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueKind::Exact => f.write_str("exact"),
            ValueKind::Floating => f.write_str("float"),
        }
    }
}

/// Running sum that may carry a compensation term.
pub trait Accumulator<S>: Default + Clone + Send {
    fn add(&mut self, x: S);
    fn total(&self) -> S;
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl Accumulator<f64> for CompensatedSum {
    #[inline]
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Default, Clone)]
pub struct ExactSum(Exact);

impl Accumulator<Exact> for ExactSum {
    fn add(&mut self, x: Exact) {
        self.0 += x;
    }

    fn total(&self) -> Exact {
        self.0.clone()
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    type Acc: Accumulator<Self>;
    const KIND: ValueKind;

    fn from_i64(v: i64) -> Self;

    /// Irrational family values; the exact backend rejects them.
    fn from_real(v: f64) -> Result<Self>;

    fn from_rational(v: &Exact) -> Self;

    fn to_f64(&self) -> f64;

    fn to_value(&self) -> Value;

    fn abs_value(&self) -> Self;

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn sum_iter<I: IntoIterator<Item = Self>>(iter: I) -> Self {
        let mut acc = Self::Acc::default();
        for x in iter {
            acc.add(x);
        }
        acc.total()
    }
}

impl Scalar for f64 {
    type Acc = CompensatedSum;
    const KIND: ValueKind = ValueKind::Floating;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_real(v: f64) -> Result<Self> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::invalid(format!("non-finite value {v}")))
        }
    }

    fn from_rational(v: &Exact) -> Self {
        num::ToPrimitive::to_f64(v).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_value(&self) -> Value {
        Value::Float(*self)
    }

    fn abs_value(&self) -> Self {
        self.abs()
    }
}

impl Scalar for Exact {
    type Acc = ExactSum;
    const KIND: ValueKind = ValueKind::Exact;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_real(v: f64) -> Result<Self> {
        Err(Error::invalid(format!(
            "value {v} is not representable on the exact backend; use --backend float"
        )))
    }

    fn from_rational(v: &Exact) -> Self {
        v.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_value(&self) -> Value {
        Value::Exact(self.clone())
    }

    fn abs_value(&self) -> Self {
        self.abs()
    }
}

/// Round to 12 significant digits, the precision used in every serialized output.
pub fn round_sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Parses `p/q`, an integer, or a finite decimal (`0.25`, `-1.5e-3`) into an exact rational.
pub fn parse_exact(s: &str) -> Option<Exact> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let all: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut v = if scale >= 0 {
        BigRational::from_integer(all * num::pow(ten, scale as usize))
    } else {
        BigRational::new(all, num::pow(ten, (-scale) as usize))
    };
    if neg {
        v = -v;
    }
    Some(v)
}

/// A backend-tagged number for reports and serialized output.
///
/// Exact values render as `p/q` (or a bare integer); floats render with
/// 12 significant digits.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(Exact),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(v) => Scalar::to_f64(v),
            Value::Float(v) => *v,
        }
    }

    pub fn render(&self) -> String {
        match self {
            Value::Exact(v) => v.to_string(),
            Value::Float(v) => render_f64(*v),
        }
    }
}

pub fn render_f64(v: f64) -> String {
    let r = round_sig12(v);
    if r == 0.0 {
        // collapse -0
        "0".to_string()
    } else {
        format!("{r}")
    }
}

impl Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for Value {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        match self {
            Value::Exact(v) => s.serialize_str(&v.to_string()),
            Value::Float(v) => s.serialize_f64(round_sig12(*v)),
        }
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct ValueVisitor;

        impl Visitor<'_> for ValueVisitor {
            type Value = Value;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or an exact rational string `p/q`")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Value, E> {
                Ok(Value::Float(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Value, E> {
                Ok(Value::Float(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Value, E> {
                Ok(Value::Float(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Value, E> {
                parse_exact(v)
                    .map(Value::Exact)
                    .ok_or_else(|| E::custom(format!("invalid exact rational `{v}`")))
            }
        }

        d.deserialize_any(ValueVisitor)
    }
}
