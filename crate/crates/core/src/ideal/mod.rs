//! Degree-one prime ideals dividing `(n + alpha) a`, read off from integer
//! factorizations of `|P(-n)|` where `P` is the minimal polynomial of alpha.
//!
//! With `P(x) = c_d prod (x - alpha_i)`, the norm of `(n + alpha) a` is
//! `|P(-n)|`. A prime `p` not dividing `c_d * disc(P) * q` is admissible; if
//! `p | P(-n)` then `-n` is a simple root of `P` mod `p`, the prime above `p`
//! is `(p, n mod p)`, and the full `p`-adic valuation of the norm belongs to
//! that one ideal. Everything else goes into the residual part.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::cache::FactorCache;
use crate::arith::periodic::parse_rational;
use crate::arith::poly::{abs_value_at_neg, hensel_lift, roots_mod_prime, IntPoly};
use crate::arith::prime::{factorize, is_prime, Factorization};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Degree cap for minimal polynomials.
pub const MAX_DEGREE: usize = 4;

/// An algebraic irrational in `(0, 1)`: minimal polynomial plus an isolating
/// interval, together with the period whose primes are excluded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraicAlpha {
    /// `c_d, ..., c_0`
    minpoly: Vec<i64>,
    lower: String,
    upper: String,
    q_context: u64,
    #[serde(skip)]
    cached: Option<Derived>,
}

#[derive(Clone, Debug, PartialEq)]
struct Derived {
    poly: IntPoly,
    reflected: IntPoly,
    lower: BigRational,
    upper: BigRational,
    disc: BigInt,
    /// `|c_d * disc * q|`
    bad: BigInt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PrimeIdealKey {
    pub p: u128,
    /// `r` with `P(-r) = 0 mod p`; the ideal divides `(n+alpha) a` iff `n = r mod p`.
    pub root: u128,
}

impl PrimeIdealKey {
    pub fn degree(&self) -> u32 {
        1
    }
}

impl fmt::Display for PrimeIdealKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.root)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealFactorizationRecord {
    pub n: u64,
    pub norm: u128,
    pub admissible: Vec<(PrimeIdealKey, u32)>,
    pub residual_norm: u128,
}

impl IdealFactorizationRecord {
    pub fn recomposes(&self) -> bool {
        let mut acc = Some(self.residual_norm);
        for (k, u) in &self.admissible {
            acc = acc.and_then(|a| k.p.checked_pow(*u).and_then(|pu| a.checked_mul(pu)));
        }
        acc == Some(self.norm)
    }

    /// `p1^u1 p2^u2 ...` over the admissible part.
    pub fn admissible_text(&self) -> String {
        self.admissible
            .iter()
            .map(|(k, u)| format!("{}^{}@{}", k.p, u, k.root))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl AlgebraicAlpha {
    /// Validates degree, content, sign of the leading coefficient,
    /// irreducibility and that `(l, u)` inside `(0, 1)` isolates one root.
    pub fn new(minpoly: &[i64], lower: &str, upper: &str, q_context: u64) -> Result<Self> {
        let mut a = AlgebraicAlpha {
            minpoly: minpoly.to_vec(),
            lower: lower.trim().to_string(),
            upper: upper.trim().to_string(),
            q_context,
            cached: None,
        };
        a.cached = Some(a.derive()?);
        Ok(a)
    }

    fn derive(&self) -> Result<Derived> {
        if self.q_context == 0 {
            return Err(Error::InvalidInput("q must be at least 1".into()));
        }
        let poly = IntPoly::from_descending(&self.minpoly);
        let d = poly.degree();
        if poly.is_zero() || !(2..=MAX_DEGREE).contains(&d) || self.minpoly.first() == Some(&0) {
            return Err(Error::InvalidInput(format!(
                "minimal polynomial must have degree 2..={MAX_DEGREE} with nonzero leading coefficient"
            )));
        }
        if poly.leading() <= 0 {
            return Err(Error::InvalidInput("leading coefficient must be positive".into()));
        }
        poly.certify_irreducible()?;
        let lower = parse_rational(&self.lower)?;
        let upper = parse_rational(&self.upper)?;
        if !(lower >= BigRational::zero() && upper <= BigRational::one() && lower < upper) {
            return Err(Error::InvalidInput("interval must satisfy 0 <= l < u <= 1".into()));
        }
        let count = poly.count_real_roots(&lower, &upper);
        if count != 1 || poly.eval_rational(&upper).is_zero() {
            return Err(Error::InvalidInput(format!(
                "interval ({}, {}) contains {count} roots, expected exactly one",
                self.lower, self.upper
            )));
        }
        let disc = poly.discriminant();
        let bad = (BigInt::from(poly.leading()) * &disc * BigInt::from(self.q_context)).abs();
        Ok(Derived {
            reflected: poly.reflect(),
            poly,
            lower,
            upper,
            disc,
            bad,
        })
    }

    fn derived(&self) -> &Derived {
        self.cached.as_ref().expect("validated on construction")
    }

    /// Re-validates after deserialization.
    pub fn revalidate(mut self) -> Result<Self> {
        self.cached = Some(self.derive()?);
        Ok(self)
    }

    pub fn minpoly(&self) -> &[i64] {
        &self.minpoly
    }

    pub fn poly(&self) -> &IntPoly {
        &self.derived().poly
    }

    /// `P(-x)`, whose roots mod `p` are the root classes of the primes above `p`.
    pub fn reflected(&self) -> &IntPoly {
        &self.derived().reflected
    }

    pub fn interval(&self) -> (&str, &str) {
        (&self.lower, &self.upper)
    }

    pub fn q_context(&self) -> u64 {
        self.q_context
    }

    pub fn with_q(&self, q: u64) -> Result<Self> {
        Self::new(&self.minpoly, &self.lower, &self.upper, q)
    }

    pub fn degree(&self) -> usize {
        self.poly().degree()
    }

    pub fn leading(&self) -> i64 {
        self.poly().leading()
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.derived().disc
    }

    /// Membership of the rational prime `p` in the admissible set (apart
    /// from having a root mod `p`): `p` prime, `p` does not divide
    /// `c_d * disc * q`.
    pub fn is_good_prime(&self, p: u128) -> bool {
        is_prime(p) && !(&self.derived().bad % BigInt::from(p)).is_zero()
    }

    /// The admissible ideals above `p` (empty if `p` is bad or has no root).
    pub fn ideals_above(&self, p: u128) -> Result<Vec<PrimeIdealKey>> {
        if !self.is_good_prime(p) {
            return Ok(Vec::new());
        }
        Ok(roots_mod_prime(self.reflected(), p)?
            .into_iter()
            .map(|root| PrimeIdealKey { p, root })
            .collect())
    }

    pub fn is_admissible(&self, key: &PrimeIdealKey) -> bool {
        self.is_good_prime(key.p)
            && key.root < key.p
            && self.reflected().eval_mod(key.root, key.p) == 0
    }

    /// `|P(-n)|`, the norm of `(n + alpha) a`.
    pub fn norm_value(&self, n: u64) -> Result<u128> {
        abs_value_at_neg(self.poly(), n)
    }

    pub fn ideal_factorize(&self, n: u64) -> Result<IdealFactorizationRecord> {
        let norm = self.norm_value(n)?;
        Ok(self.split_factorization(n, &factorize(norm)))
    }

    pub fn ideal_factorize_cached(&self, n: u64, cache: &FactorCache) -> Result<IdealFactorizationRecord> {
        let norm = self.norm_value(n)?;
        Ok(self.split_factorization(n, &cache.factorize(norm)))
    }

    /// Splits a factorization of `|P(-n)|` into admissible and residual parts.
    pub fn split_factorization(&self, n: u64, fac: &Factorization) -> IdealFactorizationRecord {
        let mut admissible = Vec::new();
        let mut residual = 1u128;
        for &(p, e) in &fac.factors {
            if !(&self.derived().bad % BigInt::from(p)).is_zero() {
                let root = (n as u128) % p;
                debug_assert_eq!(self.reflected().eval_mod(root, p), 0);
                admissible.push((PrimeIdealKey { p, root }, e));
            } else {
                residual *= p.pow(e);
            }
        }
        IdealFactorizationRecord { n, norm: fac.target, admissible, residual_norm: residual }
    }

    /// `r_v`, the class mod `p^v` of all `n` with `key^v | (n + alpha) a`.
    pub fn root_lift(&self, key: &PrimeIdealKey, v: u32) -> Result<u128> {
        if !self.is_admissible(key) {
            return Err(Error::PreconditionViolated(format!("{key} is not admissible")));
        }
        hensel_lift(self.reflected(), key.p, key.root, v)
    }

    /// Whether `key^v` divides `(n + alpha) a`.
    pub fn ideal_divides(&self, key: &PrimeIdealKey, v: u32, n: u64) -> Result<bool> {
        let rv = self.root_lift(key, v)?;
        let pv = key.p.checked_pow(v).ok_or_else(|| Error::Overflow(format!("{}^{v}", key.p)))?;
        Ok((n as u128) % pv == rv)
    }

    /// Both `n1` and `n2` must be divisible by `key^v`; then they agree mod `p^v`.
    pub fn congruence_check(&self, key: &PrimeIdealKey, v: u32, n1: u64, n2: u64) -> Result<bool> {
        for n in [n1, n2] {
            if !self.ideal_divides(key, v, n)? {
                return Err(Error::PreconditionViolated(format!(
                    "{key}^{v} does not divide ({n} + alpha) a"
                )));
            }
        }
        let pv = key.p.pow(v);
        Ok((n1 as u128) % pv == (n2 as u128) % pv)
    }

    /// The root as an exact rational to within `2^-bits`, by bisection on
    /// the isolating interval.
    pub fn approximate(&self, bits: u32) -> (BigRational, BigRational) {
        let d = self.derived();
        let (mut lo, mut hi) = (d.lower.clone(), d.upper.clone());
        let sign_lo = d.poly.eval_rational(&lo).is_positive();
        let width = BigRational::new(BigInt::one(), BigInt::one() << bits);
        let two = BigRational::from_integer(BigInt::from(2));
        while &hi - &lo > width {
            let mid = (&lo + &hi) / &two;
            let v = d.poly.eval_rational(&mid);
            if v.is_zero() {
                return (mid.clone(), mid);
            }
            if v.is_positive() == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, hi)
    }

    pub fn value<T: Real>(&self) -> T {
        let (lo, hi) = self.approximate(T::MANTISSA_BITS + 8);
        let mid = (lo + hi) / BigRational::from_integer(BigInt::from(2));
        T::from_ratio(&mid)
    }

    pub fn value_f64(&self) -> f64 {
        self.value::<f64>()
    }

    /// The minimal polynomial as text `c_d,...,c_0`.
    pub fn minpoly_text(&self) -> String {
        self.minpoly.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sqrt2m1() -> AlgebraicAlpha {
        AlgebraicAlpha::new(&[1, 2, -1], "0.4", "0.5", 1).unwrap()
    }

    #[test]
    fn validation() {
        assert!(AlgebraicAlpha::new(&[1, 2, -1], "0", "1", 1).is_ok());
        assert!(AlgebraicAlpha::new(&[1, 2, -1], "0.5", "1", 1).is_err());
        assert!(AlgebraicAlpha::new(&[1, -3, 2], "0", "1", 1).is_err());
        assert!(AlgebraicAlpha::new(&[2, 4, -2], "0", "1", 1).is_err());
        assert!(AlgebraicAlpha::new(&[-1, -2, 1], "0", "1", 1).is_err());
        assert!(AlgebraicAlpha::new(&[1, 0, 0, 0, 0, -2], "0", "1", 1).is_err());
        let golden = AlgebraicAlpha::new(&[1, 1, -1], "0.6", "0.7", 1).unwrap();
        assert!((golden.value_f64() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        let cube = AlgebraicAlpha::new(&[1, 0, 0, -2], "0.2", "0.3", 1);
        assert!(cube.is_err());
        let cube = AlgebraicAlpha::new(&[8, 0, 0, -2], "0.6", "0.7", 1);
        // 8x^3 - 2 has content 2
        assert!(cube.is_err());
        let cube = AlgebraicAlpha::new(&[4, 0, 0, -1], "0.6", "0.7", 1).unwrap();
        assert!((cube.value_f64() - 0.25f64.cbrt()).abs() < 1e-15);
    }

    #[test]
    fn norm_examples() {
        let a = sqrt2m1();
        assert_eq!(a.norm_value(4).unwrap(), 7);
        assert_eq!(a.norm_value(0).unwrap(), 1);
        assert_eq!(a.norm_value(13).unwrap(), 142);
        let big = AlgebraicAlpha::new(&[1, 0, 0, 0, -2], "0", "1", 1);
        assert!(big.is_err()); // root 2^{1/4} > 1
    }

    #[test]
    fn factorization_examples() {
        let a = sqrt2m1();
        let r = a.ideal_factorize(4).unwrap();
        assert_eq!(r.admissible, vec![(PrimeIdealKey { p: 7, root: 4 }, 1)]);
        assert_eq!(r.residual_norm, 1);
        let r = a.ideal_factorize(1).unwrap();
        assert!(r.admissible.is_empty());
        assert_eq!(r.residual_norm, 2);
        let r = a.ideal_factorize(13).unwrap();
        assert_eq!(r.admissible, vec![(PrimeIdealKey { p: 71, root: 13 }, 1)]);
        assert_eq!(r.residual_norm, 2);
        // q context removes primes dividing q
        let a3 = a.with_q(7).unwrap();
        let r = a3.ideal_factorize(4).unwrap();
        assert!(r.admissible.is_empty());
        assert_eq!(r.residual_norm, 7);
    }

    #[test]
    fn congruence_examples() {
        let a = sqrt2m1();
        let k = PrimeIdealKey { p: 7, root: 4 };
        assert_eq!(a.congruence_check(&k, 1, 4, 11), Ok(true));
        assert_eq!(a.congruence_check(&k, 2, 11, 60), Ok(true));
        assert_eq!(a.norm_value(60).unwrap(), 3479);
        assert!(matches!(a.congruence_check(&k, 1, 4, 5), Err(Error::PreconditionViolated(_))));
        assert_eq!(a.root_lift(&k, 2), Ok(11));
    }

    #[test]
    fn conjugate_products() {
        let a = sqrt2m1();
        let (r1, r2) = (2f64.sqrt() - 1.0, -2f64.sqrt() - 1.0);
        for n in [0u64, 5, 77, 1000, 99_999] {
            let prod = ((n as f64 + r1) * (n as f64 + r2)).abs();
            let norm = a.norm_value(n).unwrap() as f64;
            assert!((prod - norm).abs() <= 1e-6 * norm.max(1.0));
        }
    }

    #[test]
    fn high_precision_value() {
        use crate::scalar::Mp;
        let a = sqrt2m1();
        let v: Mp<170> = a.value();
        let two = Mp::<170>::from_i64(2);
        let err = (v + Mp::<170>::from_i64(1)) * (a.value::<Mp<170>>() + Mp::<170>::from_i64(1)) - two;
        assert!(err.abs().to_f64() < 1e-49);
    }

    proptest! {
        #[test]
        fn records_recompose(n in 0u64..1_000_000_000) {
            let a = sqrt2m1();
            let r = a.ideal_factorize(n).unwrap();
            prop_assert!(r.recomposes());
            for (k, _) in &r.admissible {
                prop_assert!(a.is_admissible(k));
                prop_assert_eq!(k.root, n as u128 % k.p);
            }
        }
    }
}
