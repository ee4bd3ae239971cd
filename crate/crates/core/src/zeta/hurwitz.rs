//! Hurwitz zeta by Euler-Maclaurin summation.
//!
//! For a shift `N >= 0` and `y = N + x`,
//!
//! ```text
//! zeta(s, x) = sum_{n<N} (n+x)^{-s} + y^{1-s}/(s-1) + y^{-s}/2
//!            + sum_{k=1}^{K} B_{2k}/(2k)! (s)_{2k-1} y^{-s-2k+1} + R_K
//! ```
//!
//! with `(s)_m` the rising factorial. Writing `R_K` as the `K+1` term plus
//! the integral of `B~_{2K+2}(t) (s)_{2K+2} (t+x)^{-s-2K-2} / (2K+2)!` over
//! `[N, oo)` and using `|B~_{2K+2}| <= |B_{2K+2}|` gives, for
//! `sigma + 2K + 1 > 0`,
//!
//! ```text
//! |R_K| <= |B_{2K+2}|/(2K+2)! y^{-sigma-2K-1}
//!          * ( |(s)_{2K+1}| + |(s)_{2K+2}| / (sigma+2K+1) ).
//! ```
//!
//! The pole is split off: the routines here return the regular part
//! `zeta(s,x) - 1/(s-1)`, where `(y^{1-s} - 1)/(s-1)` is evaluated as
//! `-ln y (e^w - 1)/w`, `w = (1-s) ln y`, which is finite at `s = 1`.

use serde::{Deserialize, Serialize};

use crate::complex::{self, Cx};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::zeta::bernoulli::b2k_over_fact_in;

/// `s = sigma + i t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub sigma: f64,
    pub t: f64,
}

impl ComplexPoint {
    pub fn new(sigma: f64, t: f64) -> Self {
        ComplexPoint { sigma, t }
    }

    pub fn to_cx<T: Real>(&self) -> Cx<T> {
        complex::cx_f64(self.sigma, self.t)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalResult<T> {
    pub value: Cx<T>,
    pub abs_error_bound: T,
    pub pole_flag: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionProfile {
    pub working_digits: u32,
    pub target_tolerance: f64,
}

impl PrecisionProfile {
    /// Default tolerance `10^-(digits - 5)` for the scalar's precision.
    pub fn for_scalar<T: Real>() -> Self {
        let d = T::working_digits();
        PrecisionProfile {
            working_digits: d,
            target_tolerance: 10f64.powi(-(d as i32 - 5)),
        }
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.target_tolerance = tol;
        self
    }

    pub fn validate<T: Real>(&self) -> Result<()> {
        if self.working_digits < 15 {
            return Err(Error::InvalidInput("working digits must be at least 15".into()));
        }
        if !(self.target_tolerance > 0.0) {
            return Err(Error::InvalidInput("tolerance must be positive".into()));
        }
        if self.working_digits > T::working_digits() {
            return Err(Error::InvalidInput(format!(
                "{} digits requested but the scalar carries {}",
                self.working_digits,
                T::working_digits()
            )));
        }
        let floor = 10f64.powi(-(self.working_digits as i32));
        if self.target_tolerance < floor {
            return Err(Error::InvalidInput(format!(
                "tolerance {:e} below the resolution of {} digits",
                self.target_tolerance, self.working_digits
            )));
        }
        Ok(())
    }
}

/// Distance from `s` to 1 below which a value is flagged as at the pole.
pub const POLE_RADIUS: f64 = 1e-12;

const MAX_SHIFT: u64 = 1 << 22;

/// `(e^w - 1)/w`.
fn expm1_over<T: Real>(w: &Cx<T>) -> Cx<T> {
    let small = complex::abs(w) < T::from_f64(0.5);
    if !small {
        return (complex::exp(w) - complex::one::<T>()) / w.clone();
    }
    // sum_{k>=0} w^k/(k+1)!, stopping once terms drop below epsilon
    let eps = T::epsilon();
    let mut term = complex::one::<T>();
    let mut acc = term.clone();
    let mut k = 1i64;
    loop {
        term = complex::scale(&(term * w.clone()), &(T::one() / T::from_i64(k + 1)));
        acc = acc + term.clone();
        if complex::abs(&term) < eps.clone() * complex::abs(&acc) || k > 200 {
            break;
        }
        k += 1;
    }
    acc
}

/// Regular part `zeta(s, x) - 1/(s-1)` and an error bound, for any `x > 0`.
pub fn hurwitz_regular<T: Real>(s: &Cx<T>, x: &T, tol: &T) -> Result<(Cx<T>, T)> {
    if !(x > &T::zero()) {
        return Err(Error::InvalidShift(x.to_f64()));
    }
    let sigma = s.re.clone();
    let t_abs = s.im.abs().to_f64();
    let digits = T::working_digits() as f64;
    let wanted = 10f64.max(t_abs.ceil()).max((digits / 2.0).ceil());
    // the remainder bound needs sigma + 2K + 1 > 0 for the K we reach
    let sigma_f = sigma.to_f64();
    if sigma_f + 2.0 * K_MAX as f64 + 1.0 <= 0.0 {
        return Err(Error::InvalidInput(format!("sigma = {sigma_f} too far left")));
    }
    let x_floor = x.to_f64().floor();
    let mut shift = (wanted - x_floor).max(0.0) as u64;
    loop {
        let (value, trunc, rounding) = em_core(s, x, shift, tol);
        let err = trunc.clone() + rounding.clone();
        if err <= *tol {
            return Ok((value, err));
        }
        // a longer head only adds rounding error
        if rounding.clone() * T::from_i64(2) > *tol || shift >= MAX_SHIFT {
            return Err(Error::ToleranceUnreachable {
                requested: tol.to_f64(),
                achieved: err.to_f64(),
            });
        }
        shift = (2 * shift).max(16);
    }
}

const K_MAX: usize = 30;

/// One Euler-Maclaurin pass with a fixed shift. Returns the value at the
/// best `K` tried, its truncation bound and a rounding allowance.
fn em_core<T: Real>(s: &Cx<T>, x: &T, shift: u64, tol: &T) -> (Cx<T>, T, T) {
    let sigma = s.re.clone();
    let y = T::from_u64(shift) + x.clone();
    let ln_y = y.ln();
    let y_inv2 = T::one() / (y.clone() * y.clone());

    let mut head = Cx::new(T::zero(), T::zero());
    let mut abs_sum = T::zero();
    for n in 0..shift {
        let term = complex::real_pow_neg(&(T::from_u64(n) + x.clone()), s);
        abs_sum += complex::abs(&term);
        head = head + term;
    }

    let one = complex::one::<T>();
    let w = (one - s.clone()) * Cx::new(ln_y.clone(), T::zero());
    let mid = -(expm1_over(&w) * Cx::new(ln_y.clone(), T::zero()));
    let y_s = complex::real_pow_neg(&y, s);
    let half = complex::scale(&y_s, &T::from_f64(0.5));
    abs_sum += complex::abs(&mid) + complex::abs(&half);
    let base = head + mid + half;

    // pw = y^{-s-2k+1}, rising = (s)_{2k-1}, y_real = y^{-sigma-2k+1}
    let mut pw = y_s / Cx::new(y.clone(), T::zero());
    let mut rising = s.clone();
    let mut corr = Cx::new(T::zero(), T::zero());
    let mut y_real = (-(sigma.clone()) * ln_y).exp() / y;
    let eps = T::epsilon();
    let mut best: Option<(Cx<T>, T, T)> = None;
    for k in 1..=K_MAX {
        let b = b2k_over_fact_in::<T>(k);
        let term = complex::scale(&(rising.clone() * pw.clone()), &b);
        abs_sum += complex::abs(&term);
        corr = corr + term;

        let kk = T::from_i64(2 * k as i64);
        let rising_next = rising.clone()
            * (s.clone() + Cx::new(kk.clone() - T::one(), T::zero()))
            * (s.clone() + Cx::new(kk.clone(), T::zero()));
        let rising_next2 = rising_next.clone() * (s.clone() + Cx::new(kk.clone() + T::one(), T::zero()));
        let denom = sigma.clone() + kk + T::one();
        let y_next = y_real.clone() * y_inv2.clone();
        let trunc = if denom > T::zero() {
            b2k_over_fact_in::<T>(k + 1).abs()
                * y_next.clone()
                * (complex::abs(&rising_next) + complex::abs(&rising_next2) / denom)
        } else {
            T::from_f64(f64::INFINITY)
        };
        let rounding = eps.clone() * T::from_u64(shift + 2 * k as u64 + 8) * abs_sum.clone();
        let total = trunc.clone() + rounding.clone();
        if best.as_ref().map_or(true, |(_, t, r)| total < t.clone() + r.clone()) {
            best = Some((base.clone() + corr.clone(), trunc.clone(), rounding.clone()));
        }
        // cheap to overshoot the request; stop once rounding dominates
        if total <= *tol && (trunc.clone() * T::from_i64(1000) <= *tol || trunc <= rounding) {
            break;
        }
        rising = rising_next;
        pw = pw * Cx::new(y_inv2.clone(), T::zero());
        y_real = y_next;
    }
    best.expect("at least one correction term")
}

/// `zeta(s, x)` for `x > 0`.
pub fn hurwitz_zeta_any<T: Real>(s: &Cx<T>, x: &T, prof: &PrecisionProfile) -> Result<EvalResult<T>> {
    let one = complex::one::<T>();
    let d = s.clone() - one;
    let dist = complex::abs(&d).to_f64();
    if d.re.is_zero() && d.im.is_zero() {
        return Err(Error::PoleAtOne);
    }
    let tol = T::from_f64(prof.target_tolerance);
    let (reg, err) = hurwitz_regular(s, x, &tol)?;
    let value = reg + complex::one::<T>() / d;
    Ok(EvalResult {
        value,
        abs_error_bound: err,
        pole_flag: dist < POLE_RADIUS,
    })
}

/// `zeta(s, x)` for `x` in `(0, 1]`.
pub fn hurwitz_zeta<T: Real>(s: &Cx<T>, x: &T, prof: &PrecisionProfile) -> Result<EvalResult<T>> {
    if !(x > &T::zero() && x <= &T::one()) {
        return Err(Error::InvalidShift(x.to_f64()));
    }
    hurwitz_zeta_any(s, x, prof)
}

/// Truncated direct sum `sum_{n<N} (n+x)^{-s}` together with the integral
/// tail bracket `[ (N+x)^{1-sigma}/(sigma-1), (N-1+x)^{1-sigma}/(sigma-1) ]`
/// for the modulus of the omitted part (real `s > 1` only gives a bracket
/// on the value itself).
pub fn direct_sum<T: Real>(s: &Cx<T>, x: &T, n_terms: u64) -> (Cx<T>, T) {
    let mut acc = Cx::new(T::zero(), T::zero());
    for n in 0..n_terms {
        acc = acc + complex::real_pow_neg(&(T::from_u64(n) + x.clone()), s);
    }
    let sm1 = s.re.clone() - T::one();
    let base = T::from_u64(n_terms) + x.clone() - T::one();
    let tail = (-(sm1.clone()) * base.ln()).exp() / sm1;
    (acc, tail)
}
