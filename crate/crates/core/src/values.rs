//! Elements of a rank-two lexicographically ordered group `Q × Q`, plus `∞`.
//!
//! The base valuation embeds as `v_p(a) ↦ (0, v_p(a))`; values with a
//! positive first coordinate exceed every element of the base group.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg};
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational_at};
use crate::Rational;

/// A value `(hi, lo)` ordered lexicographically, or `∞`.
///
/// Variant order matters: the derived `Ord` puts every finite value below
/// `Infinity` and compares finite values on `hi` first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Finite { hi: Rational, lo: Rational },
    Infinity,
}

impl Value {
    pub fn new(hi: Rational, lo: Rational) -> Self {
        Value::Finite { hi, lo }
    }

    /// Element of the base group: `(0, lo)`.
    pub fn base(lo: Rational) -> Self {
        Value::Finite {
            hi: Rational::zero(),
            lo,
        }
    }

    pub fn int(lo: i64) -> Self {
        Value::base(Rational::from_integer(lo.into()))
    }

    pub fn zero() -> Self {
        Value::int(0)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Value::Infinity)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    pub fn hi(&self) -> Option<&Rational> {
        match self {
            Value::Finite { hi, .. } => Some(hi),
            Value::Infinity => None,
        }
    }

    pub fn lo(&self) -> Option<&Rational> {
        match self {
            Value::Finite { lo, .. } => Some(lo),
            Value::Infinity => None,
        }
    }

    /// `self - other` for finite operands; `None` when `other` is `∞`.
    /// `∞ - finite` stays `∞`.
    pub fn checked_sub(&self, other: &Value) -> Option<Value> {
        match (self, other) {
            (_, Value::Infinity) => None,
            (Value::Infinity, _) => Some(Value::Infinity),
            (Value::Finite { hi: a, lo: b }, Value::Finite { hi: c, lo: d }) => {
                Some(Value::new(a - c, b - d))
            }
        }
    }

    /// `n · self` for a non-negative integer `n`. `0 · ∞` is taken to be `0`
    /// so that the `i = 0` term of an expansion never contributes `∞`.
    pub fn mul_int(&self, n: usize) -> Value {
        match self {
            _ if n == 0 => Value::zero(),
            Value::Infinity => Value::Infinity,
            Value::Finite { hi, lo } => {
                let k = Rational::from_integer(n.into());
                Value::new(hi * &k, lo * &k)
            }
        }
    }

    pub fn div_int(&self, n: u64) -> Result<Value> {
        if n == 0 {
            return Err(Error::invalid("division of a value by zero"));
        }
        match self {
            Value::Infinity => Err(Error::invalid("cannot divide infinity")),
            Value::Finite { hi, lo } => {
                let k = Rational::from_integer(n.into());
                Ok(Value::new(hi / &k, lo / &k))
            }
        }
    }

    /// Lexicographic comparison; same as `Ord::cmp`.
    pub fn compare(&self, other: &Value) -> Ordering {
        self.cmp(other)
    }
}

impl Add<&Value> for &Value {
    type Output = Value;

    fn add(self, rhs: &Value) -> Value {
        match (self, rhs) {
            (Value::Finite { hi: a, lo: b }, Value::Finite { hi: c, lo: d }) => {
                Value::new(a + c, b + d)
            }
            _ => Value::Infinity,
        }
    }
}

impl Add for Value {
    type Output = Value;

    fn add(self, rhs: Value) -> Value {
        &self + &rhs
    }
}

impl Neg for &Value {
    type Output = Value;

    /// Panics on `∞`, which has no inverse.
    fn neg(self) -> Value {
        match self {
            Value::Finite { hi, lo } => Value::new(-hi, -lo),
            Value::Infinity => panic!("negation of infinity"),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Infinity => f.write_str("inf"),
            Value::Finite { hi, lo } if hi.is_zero() => f.write_str(&format_rational(lo)),
            Value::Finite { hi, lo } => {
                write!(f, "{}|{}", format_rational(hi), format_rational(lo))
            }
        }
    }
}

impl FromStr for Value {
    type Err = Error;

    fn from_str(s: &str) -> Result<Value> {
        let t = s.trim();
        if t == "inf" {
            return Ok(Value::Infinity);
        }
        match t.split_once('|') {
            Some((h, l)) => {
                let hi = parse_rational_at(h, 0)?;
                let lo = parse_rational_at(l, h.len() + 1)?;
                Ok(Value::new(hi, lo))
            }
            None => Ok(Value::base(parse_rational_at(t, 0)?)),
        }
    }
}
