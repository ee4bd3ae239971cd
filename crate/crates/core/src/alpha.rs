//! The shift parameter alpha and its arithmetic type.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::prime::gcd;
use crate::error::{Error, Result};
use crate::ideal::AlgebraicAlpha;
use crate::scalar::Real;

/// `alpha = a/b` in lowest terms, `0 < alpha <= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalShift {
    a: u64,
    b: u64,
}

impl RationalShift {
    /// Reduces `a/b`; requires `0 < a/b <= 1`.
    pub fn new(a: u64, b: u64) -> Result<Self> {
        if a == 0 || b == 0 || a > b {
            return Err(Error::InvalidInput(format!("alpha = {a}/{b} must lie in (0, 1]")));
        }
        let g = gcd(a as u128, b as u128) as u64;
        Ok(RationalShift { a: a / g, b: b / g })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn is_one(&self) -> bool {
        self.a == 1 && self.b == 1
    }

    pub fn value<T: Real>(&self) -> T {
        T::from_u64(self.a) / T::from_u64(self.b)
    }
}

impl fmt::Display for RationalShift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a, self.b)
    }
}

impl std::str::FromStr for RationalShift {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidInput(format!("expected a/b, got {s:?}"));
        match s.split_once('/') {
            Some((a, b)) => Self::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            None if s == "1" => Self::new(1, 1),
            None => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlphaParameter {
    Rational(RationalShift),
    Algebraic(AlgebraicAlpha),
    /// A bare decimal: usable for evaluation, carries no arithmetic type.
    UntypedFloat { value: f64 },
}

impl AlphaParameter {
    /// `a/b` gives a rational shift, anything else must be a decimal in
    /// `(0, 1]` and is tagged as untyped.
    pub fn parse(s: &str) -> Result<Self> {
        if s.contains('/') || s.trim() == "1" {
            return Ok(AlphaParameter::Rational(s.parse()?));
        }
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("cannot parse alpha {s:?}")))?;
        if !(v > 0.0 && v <= 1.0) {
            return Err(Error::InvalidShift(v));
        }
        Ok(AlphaParameter::UntypedFloat { value: v })
    }

    pub fn value<T: Real>(&self) -> T {
        match self {
            AlphaParameter::Rational(r) => r.value(),
            AlphaParameter::Algebraic(a) => a.value(),
            AlphaParameter::UntypedFloat { value } => T::from_f64(*value),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            AlphaParameter::Rational(r) => format!("rational {r}"),
            AlphaParameter::Algebraic(a) => {
                let (l, u) = a.interval();
                format!("algebraic root of [{}] in ({l}, {u})", a.minpoly_text())
            }
            AlphaParameter::UntypedFloat { value } => format!("untyped float {value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        assert_eq!(AlphaParameter::parse("1/3").unwrap(), AlphaParameter::Rational(RationalShift::new(1, 3).unwrap()));
        assert_eq!(AlphaParameter::parse("2/4").unwrap(), AlphaParameter::Rational(RationalShift::new(1, 2).unwrap()));
        assert!(AlphaParameter::parse("1/1").unwrap().value::<f64>() == 1.0);
        assert!(matches!(AlphaParameter::parse("0.25").unwrap(), AlphaParameter::UntypedFloat { .. }));
        assert!(AlphaParameter::parse("4/3").is_err());
        assert!(AlphaParameter::parse("0").is_err());
        assert!(AlphaParameter::parse("x").is_err());
    }
}
