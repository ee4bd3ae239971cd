//! Complex helpers over any [`Real`] scalar.

use num_complex::Complex;

use crate::scalar::Real;

pub type Cx<T> = Complex<T>;

pub fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

pub fn cx_f64<T: Real>(re: f64, im: f64) -> Cx<T> {
    Complex::new(T::from_f64(re), T::from_f64(im))
}

pub fn real<T: Real>(re: T) -> Cx<T> {
    Complex::new(re, T::zero())
}

pub fn abs<T: Real>(z: &Cx<T>) -> T {
    z.re.hypot(&z.im)
}

pub fn arg<T: Real>(z: &Cx<T>) -> T {
    z.im.atan2(&z.re)
}

/// `e^{i theta}`.
pub fn cis<T: Real>(theta: &T) -> Cx<T> {
    let (s, c) = theta.sin_cos();
    Complex::new(c, s)
}

pub fn exp<T: Real>(z: &Cx<T>) -> Cx<T> {
    let m = z.re.exp();
    let (s, c) = z.im.sin_cos();
    Complex::new(m.clone() * c, m * s)
}

pub fn ln<T: Real>(z: &Cx<T>) -> Cx<T> {
    Complex::new(abs(z).ln(), arg(z))
}

/// `x^{-s}` for real `x > 0`.
pub fn real_pow_neg<T: Real>(x: &T, s: &Cx<T>) -> Cx<T> {
    let l = x.ln();
    let m = (-(s.re.clone() * l.clone())).exp();
    let (sn, cs) = (s.im.clone() * l).sin_cos();
    Complex::new(m.clone() * cs, -(m * sn))
}

/// `x^{s}` for real `x > 0`.
pub fn real_pow<T: Real>(x: &T, s: &Cx<T>) -> Cx<T> {
    let l = x.ln();
    let m = (s.re.clone() * l.clone()).exp();
    let (sn, cs) = (s.im.clone() * l).sin_cos();
    Complex::new(m.clone() * cs, m * sn)
}

pub fn scale<T: Real>(z: &Cx<T>, k: &T) -> Cx<T> {
    Complex::new(z.re.clone() * k.clone(), z.im.clone() * k.clone())
}

/// `z / |z|`, or 1 when `z = 0`.
pub fn unit<T: Real>(z: &Cx<T>) -> Cx<T> {
    let m = abs(z);
    if m.is_zero() {
        Complex::new(T::one(), T::zero())
    } else {
        Complex::new(z.re.clone() / m.clone(), z.im.clone() / m)
    }
}

pub fn to_f64<T: Real>(z: &Cx<T>) -> Cx<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

pub fn from_f64<T: Real>(z: &Cx<f64>) -> Cx<T> {
    Complex::new(T::from_f64(z.re), T::from_f64(z.im))
}

pub fn one<T: Real>() -> Cx<T> {
    Complex::new(T::one(), T::zero())
}
