//! Periodic coefficient functions with exact Gaussian-rational values.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::cyclotomic::{rational_to_real, Cyclotomic};
use crate::complex::Cx;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A Gaussian rational `re + i im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl CRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        CRational { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        CRational::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        CRational::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Self) -> Self {
        CRational::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &Self) -> Self {
        CRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CRational::new(&self.re * r, &self.im * r)
    }

    pub fn neg(&self) -> Self {
        CRational::new(-&self.re, -&self.im)
    }

    pub fn conj(&self) -> Self {
        CRational::new(self.re.clone(), -&self.im)
    }

    /// `|z|^2`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_complex<T: Real>(&self) -> Cx<T> {
        Cx::new(rational_to_real(&self.re), rational_to_real(&self.im))
    }

    pub fn abs<T: Real>(&self) -> T {
        if self.im.is_zero() {
            rational_to_real::<T>(&self.re.abs())
        } else if self.re.is_zero() {
            rational_to_real::<T>(&self.im.abs())
        } else {
            rational_to_real::<T>(&self.norm_sqr()).sqrt()
        }
    }

    pub fn to_cyclotomic(&self, order: u64) -> Cyclotomic {
        Cyclotomic::gaussian(order, self.re.clone(), self.im.clone())
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{}i", fmt_rational(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(f, "{}{}{}i", fmt_rational(&self.re), sign, fmt_rational(&self.im.abs()))
            }
        }
    }
}

/// Parses `3`, `-2/7`, `0.25`, `1e-3` exactly (decimals as the exact
/// decimal fraction, not the nearest binary float).
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("cannot parse {s:?} as a rational"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

impl FromStr for CRational {
    type Err = Error;

    /// Accepts `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` with each part parsed by
    /// [`parse_rational`].
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::InvalidInput("empty value".into()));
        }
        let Some(body) = t.strip_suffix(['i', 'j']) else {
            return Ok(CRational::new(parse_rational(&t)?, BigRational::zero()));
        };
        // split at the last sign that is not the leading one or part of an exponent
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("", body),
        };
        let im = match im {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            x => parse_rational(x)?,
        };
        let re = if re.is_empty() { BigRational::zero() } else { parse_rational(re)? };
        Ok(CRational::new(re, im))
    }
}

impl Serialize for CRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `f(n)` for `n >= 0`, periodic with period `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicFunction {
    values: Vec<CRational>,
}

impl PeriodicFunction {
    pub fn new(values: Vec<CRational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("period must be at least 1".into()));
        }
        if values.iter().all(CRational::is_zero) {
            return Err(Error::InvalidInput("f is identically zero".into()));
        }
        Ok(PeriodicFunction { values })
    }

    pub fn from_ints(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| CRational::from_int(v)).collect())
    }

    /// Float values, taken as their exact binary expansions.
    pub fn from_f64(values: &[f64]) -> Result<Self> {
        let conv = |x: f64| {
            BigRational::from_float(x).ok_or_else(|| Error::InvalidInput(format!("non-finite value {x}")))
        };
        Self::new(
            values
                .iter()
                .map(|&x| Ok(CRational::new(conv(x)?, BigRational::zero())))
                .collect::<Result<_>>()?,
        )
    }

    /// Parses a comma-separated list of values and checks it against the
    /// declared period. A single value is repeated to fill the period.
    pub fn parse(text: &str, q: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidInput("q must be at least 1".into()));
        }
        let vals = text
            .split(',')
            .map(str::parse::<CRational>)
            .collect::<Result<Vec<_>>>()?;
        let vals = match vals.len() {
            n if n == q => vals,
            1 => vec![vals[0].clone(); q],
            n => {
                return Err(Error::InvalidInput(format!(
                    "f has {n} values but q = {q}"
                )))
            }
        };
        Self::new(vals)
    }

    pub fn period(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[CRational] {
        &self.values
    }

    pub fn at(&self, n: i64) -> &CRational {
        &self.values[n.rem_euclid(self.values.len() as i64) as usize]
    }

    pub fn eval<T: Real>(&self, n: i64) -> Cx<T> {
        self.at(n).to_complex()
    }

    pub fn abs_at<T: Real>(&self, n: i64) -> T {
        self.at(n).abs()
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(CRational::is_real)
    }

    /// `sum_{r < q} f(r)`.
    pub fn period_sum(&self) -> CRational {
        self.values.iter().fold(CRational::zero(), |acc, v| acc.add(v))
    }

    pub fn to_text(&self) -> String {
        self.values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    }
}
