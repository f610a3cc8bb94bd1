//! Integers extended with explicit infinities.

use std::fmt;
use std::str::FromStr;

/// Largest magnitude accepted for a finite entry.
///
/// Every formula evaluated by the reductions (shifted column differences,
/// rank offsets, `2(i+k) - M[i,k]`, the `3W+2` sentinels) stays far inside
/// `i64` when inputs are confined to this range.
pub const FINITE_LIMIT: i64 = 1 << 40;

/// An integer or one of the two infinities.
///
/// The derived ordering is the one the products need:
/// `NegInf < Fin(_) < PosInf`, finite values compared numerically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    NegInf,
    Fin(i64),
    PosInf,
}

impl Value {
    pub const ZERO: Value = Value::Fin(0);
    pub const ONE: Value = Value::Fin(1);

    pub fn is_finite(self) -> bool {
        matches!(self, Value::Fin(_))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Value::Fin(x) => Some(x),
            _ => None,
        }
    }

    /// Returns the finite payload, panicking on an infinity.
    ///
    /// Only used after validation has established finiteness.
    pub fn expect_finite(self) -> i64 {
        match self {
            Value::Fin(x) => x,
            other => panic!("expected a finite value, found {other}"),
        }
    }

    pub fn from_bool(b: bool) -> Value {
        Value::Fin(b as i64)
    }

    pub fn is_one(self) -> bool {
        self == Value::ONE
    }

    /// Tropical addition: any `+inf` operand absorbs, then any `-inf`.
    pub fn saturating_add(self, other: Value) -> Value {
        match (self, other) {
            (Value::PosInf, _) | (_, Value::PosInf) => Value::PosInf,
            (Value::NegInf, _) | (_, Value::NegInf) => Value::NegInf,
            (Value::Fin(a), Value::Fin(b)) => Value::Fin(a + b),
        }
    }

    pub fn neg(self) -> Value {
        match self {
            Value::NegInf => Value::PosInf,
            Value::PosInf => Value::NegInf,
            Value::Fin(x) => Value::Fin(-x),
        }
    }
}

impl From<i64> for Value {
    fn from(x: i64) -> Self {
        Value::Fin(x)
    }
}

/// Total order on extended values; `-inf` is minimal and `+inf` maximal.
pub fn compare(a: Value, b: Value) -> std::cmp::Ordering {
    a.cmp(&b)
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::NegInf => f.write_str("-inf"),
            Value::PosInf => f.write_str("inf"),
            Value::Fin(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{0}` as a value")]
pub struct ParseValueError(pub String);

impl FromStr for Value {
    type Err = ParseValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inf" | "+inf" => Ok(Value::PosInf),
            "-inf" => Ok(Value::NegInf),
            _ => s
                .parse::<i64>()
                .map(Value::Fin)
                .map_err(|_| ParseValueError(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    #[test]
    fn sentinel_ordering() {
        assert_eq!(compare(Value::NegInf, Value::Fin(0)), Ordering::Less);
        assert_eq!(compare(Value::PosInf, Value::PosInf), Ordering::Equal);
        assert_eq!(compare(Value::Fin(5), Value::Fin(3)), Ordering::Greater);
        assert!(Value::Fin(i64::MAX) < Value::PosInf);
        assert!(Value::NegInf < Value::Fin(i64::MIN));
    }

    #[test]
    fn tropical_sum_absorbs_pos_inf() {
        assert_eq!(Value::PosInf.saturating_add(Value::NegInf), Value::PosInf);
        assert_eq!(Value::Fin(2).saturating_add(Value::NegInf), Value::NegInf);
        assert_eq!(Value::Fin(2).saturating_add(Value::Fin(-7)), Value::Fin(-5));
    }

    #[test]
    fn parse_and_print() {
        for s in ["inf", "-inf", "0", "-17", "1099511627776"] {
            let v: Value = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert!("infinity".parse::<Value>().is_err());
        assert!("".parse::<Value>().is_err());
    }
}
