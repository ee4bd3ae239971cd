//! `F(s, f, alpha) = sum_{n>=0} f(n) (n+alpha)^{-s}` through the residue
//! class split `F = q^{-s} sum_{r<q} f(r) zeta(s, (r+alpha)/q)`, plus
//! absolute head and tail sums for real `sigma > 1`.

use crate::arith::periodic::PeriodicFunction;
use crate::complex::{self, Cx};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::zeta::hurwitz::{hurwitz_regular, EvalResult, PrecisionProfile, POLE_RADIUS};

fn check_alpha<T: Real>(alpha: &T) -> Result<()> {
    if alpha > &T::zero() && alpha <= &T::one() {
        Ok(())
    } else {
        Err(Error::InvalidShift(alpha.to_f64()))
    }
}

pub fn f_eval<T: Real>(
    s: &Cx<T>,
    f: &PeriodicFunction,
    alpha: &T,
    prof: &PrecisionProfile,
) -> Result<EvalResult<T>> {
    check_alpha(alpha)?;
    let q = f.period() as i64;
    let qt = T::from_i64(q);
    let one = complex::one::<T>();
    let d = s.clone() - one;
    let sum_f = f.period_sum();
    let at_one = d.re.is_zero() && d.im.is_zero();
    if at_one && !sum_f.is_zero() {
        return Err(Error::PoleAtOne);
    }
    let sigma = s.re.clone();
    let q_sigma = (-(sigma) * qt.ln()).exp();
    let abs_f: T = f
        .values()
        .iter()
        .fold(T::zero(), |a, v| a + v.abs::<T>());
    let tol = T::from_f64(prof.target_tolerance) / (T::from_i64(2) * abs_f.clone() * q_sigma.clone());

    let mut acc = Cx::new(T::zero(), T::zero());
    let mut err = T::zero();
    for (r, fr) in f.values().iter().enumerate() {
        if fr.is_zero() {
            continue;
        }
        let x = (T::from_i64(r as i64) + alpha.clone()) / qt.clone();
        let (reg, e) = hurwitz_regular(s, &x, &tol)?;
        acc = acc + fr.to_complex::<T>() * reg;
        err += fr.abs::<T>() * e;
    }
    if !sum_f.is_zero() {
        acc = acc + sum_f.to_complex::<T>() / d.clone();
    }
    let q_s = complex::real_pow_neg(&qt, s);
    let value = q_s * acc;
    let err = err * q_sigma + T::epsilon() * T::from_i64(4 * q + 4) * complex::abs(&value);
    if err > T::from_f64(prof.target_tolerance) {
        return Err(Error::ToleranceUnreachable {
            requested: prof.target_tolerance,
            achieved: err.to_f64(),
        });
    }
    Ok(EvalResult {
        value,
        abs_error_bound: err,
        pole_flag: !sum_f.is_zero() && complex::abs(&d).to_f64() < POLE_RADIUS,
    })
}

/// Truncated direct sum `sum_{n<terms} f(n) (n+alpha)^{-s}`.
pub fn direct_f_sum<T: Real>(s: &Cx<T>, f: &PeriodicFunction, alpha: &T, terms: u64) -> Cx<T> {
    let mut acc = Cx::new(T::zero(), T::zero());
    for n in 0..terms {
        let fv = f.at(n as i64);
        if fv.is_zero() {
            continue;
        }
        let base = T::from_u64(n) + alpha.clone();
        acc = acc + fv.to_complex::<T>() * complex::real_pow_neg(&base, s);
    }
    acc
}

/// `sum_{n > N, n = b mod q} (n+alpha)^{-sigma}`, exactly one residue class,
/// without the `|f(b)|` weight. Returns value and error bound.
pub fn class_tail<T: Real>(
    b: u64,
    q: u64,
    alpha: &T,
    sigma: &T,
    n: u64,
    prof: &PrecisionProfile,
) -> Result<(T, T)> {
    if sigma <= &T::one() {
        return Err(Error::DivergesAtOne(sigma.to_f64()));
    }
    let first = n + 1 + (b + q - (n + 1) % q) % q;
    let qt = T::from_u64(q);
    let x = (T::from_u64(first) + alpha.clone()) / qt.clone();
    let s = Cx::new(sigma.clone(), T::zero());
    let q_sigma = (-(sigma.clone()) * qt.ln()).exp();
    let tol = T::from_f64(prof.target_tolerance) / q_sigma.clone();
    let (reg, e) = hurwitz_regular(&s, &x, &tol)?;
    let pole = T::one() / (sigma.clone() - T::one());
    let v = (reg.re + pole) * q_sigma.clone();
    let rounding = T::epsilon() * T::from_i64(8) * v.abs();
    Ok((v, e * q_sigma + rounding))
}

/// `sum_{n > N} |f(n)| (n+alpha)^{-sigma}` with an error bound.
pub fn abs_tail_with_error<T: Real>(
    f: &PeriodicFunction,
    alpha: &T,
    sigma: &T,
    n: u64,
    prof: &PrecisionProfile,
) -> Result<(T, T)> {
    if sigma <= &T::one() {
        return Err(Error::DivergesAtOne(sigma.to_f64()));
    }
    check_alpha(alpha)?;
    let q = f.period() as u64;
    let mut acc = T::zero();
    let mut err = T::zero();
    for b in 0..q {
        let w = f.abs_at::<T>(b as i64);
        if w.is_zero() {
            continue;
        }
        let (v, e) = class_tail(b, q, alpha, sigma, n, prof)?;
        acc += w.clone() * v;
        err += w * e;
    }
    Ok((acc, err))
}

pub fn abs_tail<T: Real>(
    f: &PeriodicFunction,
    alpha: &T,
    sigma: &T,
    n: u64,
    prof: &PrecisionProfile,
) -> Result<T> {
    abs_tail_with_error(f, alpha, sigma, n, prof).map(|(v, _)| v)
}

const DIRECT_HEAD_LIMIT: u64 = 200_000;

/// `sum_{n <= N, n = b mod q} (n+alpha)^{-sigma}` with an error bound.
pub fn class_head<T: Real>(
    b: u64,
    q: u64,
    alpha: &T,
    sigma: &T,
    n: u64,
    prof: &PrecisionProfile,
) -> Result<(T, T)> {
    if b > n {
        return Ok((T::zero(), T::zero()));
    }
    let count = (n - b) / q + 1;
    if count <= DIRECT_HEAD_LIMIT {
        let mut acc = T::zero();
        let mut k = b;
        while k <= n {
            let base = T::from_u64(k) + alpha.clone();
            acc += (-(sigma.clone()) * base.ln()).exp();
            k += q;
        }
        let err = T::epsilon() * T::from_u64(count + 8) * acc.clone();
        return Ok((acc, err));
    }
    let s = Cx::new(sigma.clone(), T::zero());
    let qt = T::from_u64(q);
    let q_sigma = (-(sigma.clone()) * qt.ln()).exp();
    let tol = T::from_f64(prof.target_tolerance) / q_sigma.clone();
    let x0 = (T::from_u64(b) + alpha.clone()) / qt;
    let x1 = x0.clone() + T::from_u64(count);
    let (r0, e0) = hurwitz_regular(&s, &x0, &tol)?;
    let (r1, e1) = hurwitz_regular(&s, &x1, &tol)?;
    let v = (r0.re - r1.re) * q_sigma.clone();
    let err = (e0 + e1) * q_sigma + T::epsilon() * T::from_i64(16) * v.abs();
    Ok((v, err))
}

/// `sum_{n=0}^{N} |f(n)| (n+alpha)^{-sigma}` with an error bound. Small `N`
/// is summed directly; large `N` uses differences of Hurwitz regular parts,
/// which have no cancellation against the pole.
pub fn abs_head_with_error<T: Real>(
    f: &PeriodicFunction,
    alpha: &T,
    sigma: &T,
    n: u64,
    prof: &PrecisionProfile,
) -> Result<(T, T)> {
    check_alpha(alpha)?;
    let q = f.period() as u64;
    if n <= DIRECT_HEAD_LIMIT {
        let weights: Vec<T> = (0..q).map(|b| f.abs_at::<T>(b as i64)).collect();
        let mut acc = T::zero();
        for k in 0..=n {
            let w = &weights[(k % q) as usize];
            if w.is_zero() {
                continue;
            }
            let base = T::from_u64(k) + alpha.clone();
            acc += w.clone() * (-(sigma.clone()) * base.ln()).exp();
        }
        let err = T::epsilon() * T::from_u64(n + 8) * acc.abs();
        return Ok((acc, err));
    }
    let s = Cx::new(sigma.clone(), T::zero());
    let qt = T::from_u64(q);
    let q_sigma = (-(sigma.clone()) * qt.ln()).exp();
    let tol = T::from_f64(prof.target_tolerance) / q_sigma.clone();
    let mut acc = T::zero();
    let mut err = T::zero();
    for b in 0..q {
        let w = f.abs_at::<T>(b as i64);
        if w.is_zero() || b > n {
            continue;
        }
        // classes b, b+q, ..., last <= N
        let count = (n - b) / q + 1;
        let x0 = (T::from_u64(b) + alpha.clone()) / qt.clone();
        let x1 = x0.clone() + T::from_u64(count);
        let (r0, e0) = hurwitz_regular(&s, &x0, &tol)?;
        let (r1, e1) = hurwitz_regular(&s, &x1, &tol)?;
        acc += w.clone() * (r0.re - r1.re) * q_sigma.clone();
        err += w * (e0 + e1) * q_sigma.clone();
    }
    let err = err + T::epsilon() * T::from_i64(16) * acc.abs();
    Ok((acc, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};
    use crate::arith::periodic::PeriodicFunction;
    use crate::scalar::Mp;
    use crate::zeta::hurwitz::hurwitz_zeta;
    use std::f64::consts::PI;

    fn prof() -> PrecisionProfile {
        PrecisionProfile::for_scalar::<f64>()
    }

    #[test]
    fn alternating_and_weighted_examples() {
        let s = Cx::new(2.0, 0.0);
        let alt = PeriodicFunction::from_ints(&[1, -1]).unwrap();
        let v = f_eval(&s, &alt, &1.0, &prof()).unwrap();
        assert!((v.value.re - PI * PI / 12.0).abs() < 1e-12);
        let w = PeriodicFunction::from_ints(&[1, -2]).unwrap();
        let v = f_eval(&s, &w, &1.0, &prof()).unwrap();
        assert!((v.value.re - PI * PI / 24.0).abs() < 1e-12);
        let one = PeriodicFunction::from_ints(&[1]).unwrap();
        let s2 = Cx::new(0.7, 12.0);
        let a = f_eval(&s2, &one, &0.37, &prof()).unwrap().value;
        let b = hurwitz_zeta(&s2, &0.37, &prof()).unwrap().value;
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn class_head_paths_agree() {
        let p = prof();
        let alpha = 0.3f64;
        let sigma = 1.2f64;
        // large N goes through regular parts; compare with direct at the same N
        let (v, e) = class_head(2, 3, &alpha, &sigma, 700_000, &p).unwrap();
        let mut direct = 0.0f64;
        let mut k = 2u64;
        while k <= 700_000 {
            direct += (k as f64 + alpha).powf(-sigma);
            k += 3;
        }
        assert!((v - direct).abs() < 1e-9 + e, "{v} {direct}");
        let (h, _) = class_head(1, 2, &alpha, &sigma, 0, &p).unwrap();
        assert_eq!(h, 0.0);
    }

    #[test]
    fn removable_pole_when_period_sum_vanishes() {
        let alt = PeriodicFunction::from_ints(&[1, -1]).unwrap();
        // sum (-1)^n/(n+1) = ln 2
        let v = f_eval(&Cx::new(1.0, 0.0), &alt, &1.0, &prof()).unwrap();
        assert!((v.value.re - 2f64.ln()).abs() < 1e-12);
        let one = PeriodicFunction::from_ints(&[1, 1]).unwrap();
        assert_eq!(f_eval(&Cx::new(1.0, 0.0), &one, &0.5, &prof()), Err(Error::PoleAtOne));
    }

    #[test]
    fn matches_direct_summation_for_large_sigma() {
        let f = PeriodicFunction::parse("1,2-i,0,-1/2", 4).unwrap();
        let s = Cx::new(3.0, 5.0);
        let em = f_eval(&s, &f, &0.3, &prof()).unwrap().value;
        let direct = direct_f_sum(&s, &f, &0.3, 200_000);
        // tail below 2.3 * 200000^{-2} / 2
        assert!((em - direct).norm() < 1e-10);
    }

    #[test]
    fn abs_tail_examples() {
        let one = PeriodicFunction::from_ints(&[1]).unwrap();
        let v = abs_tail(&one, &1.0, &2.0, 0, &prof()).unwrap();
        assert!((v - (PI * PI / 6.0 - 1.0)).abs() < 1e-12);

        let half = PeriodicFunction::from_ints(&[0, 1]).unwrap();
        let v = abs_tail(&half, &0.5, &2.0, 10, &prof()).unwrap();
        // n = 11, 13, ...: (2m + 1.5)^{-2} = 1/4 zeta(2, m + 3/4), m >= 5
        let direct: f64 = (5..2_000_000).map(|m: u64| (2.0 * m as f64 + 1.5).powi(-2)).sum();
        assert!((v - direct).abs() < 1e-6);

        type M = Mp<170>;
        let mp = PrecisionProfile::for_scalar::<M>();
        let sigma = M::one() + M::from_f64(1e-4);
        let v = abs_tail(&one, &M::one(), &sigma, 10_000_000, &mp).unwrap().to_f64();
        let approx = 1e7f64.powf(-1e-4) / 1e-4;
        assert!((v - approx).abs() / approx < 0.05);
        assert!(abs_tail(&one, &1.0, &1.0, 0, &prof()).is_err());
    }

    #[test]
    fn head_paths_agree() {
        type M = Mp<170>;
        let mp = PrecisionProfile::for_scalar::<M>();
        let f = PeriodicFunction::from_ints(&[2, 0, -1]).unwrap();
        let alpha = M::from_f64(0.414);
        let sigma = M::from_f64(1.01);
        let n = DIRECT_HEAD_LIMIT + 1234;
        let (big, e1) = abs_head_with_error(&f, &alpha, &sigma, n, &mp).unwrap();
        let (small, _) = abs_head_with_error(&f, &alpha, &sigma, DIRECT_HEAD_LIMIT, &mp).unwrap();
        let mut extra = M::zero();
        for k in DIRECT_HEAD_LIMIT + 1..=n {
            let w = f.abs_at::<M>(k as i64);
            extra += w * (-(sigma.clone()) * (M::from_u64(k) + alpha.clone()).ln()).exp();
        }
        let diff = (big - small - extra).abs().to_f64();
        assert!(diff < 1e-40, "{diff}");
        assert!(e1.to_f64() < 1e-40);
    }
}
