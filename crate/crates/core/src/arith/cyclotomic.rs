//! Exact elements of the cyclotomic field `Q(zeta_n)`.
//!
//! An element is a rational vector of length `n`, read as a polynomial in
//! `zeta_n` reduced modulo `x^n - 1`. The representation is not unique, so
//! equality and zero tests reduce modulo the cyclotomic polynomial first.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::prime::divisors;
use crate::complex::{cis, Cx};
use crate::scalar::Real;

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<BigRational>,
}

fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("cyclotomic cache").get(&n) {
        return p.clone();
    }
    // x^n - 1, ascending
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let phi_d = cyclotomic_poly(d);
        num = exact_div_monic(&num, &phi_d);
    }
    cache.lock().expect("cyclotomic cache").insert(n, num.clone());
    num
}

fn exact_div_monic(a: &[BigInt], m: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let mut q = vec![BigInt::zero(); a.len() - dm];
    for k in (0..q.len()).rev() {
        let c = r[k + dm].clone();
        for (i, mi) in m.iter().enumerate() {
            r[k + i] -= &c * mi;
        }
        q[k] = c;
    }
    debug_assert!(r.iter().all(|x| x.is_zero()));
    q
}

impl Cyclotomic {
    pub fn zero(order: u64) -> Self {
        assert!(order >= 1);
        Cyclotomic {
            order,
            coeffs: vec![BigRational::zero(); order as usize],
        }
    }

    pub fn from_rational(order: u64, r: BigRational) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = r;
        z
    }

    /// `zeta_order^k`.
    pub fn root(order: u64, k: i64) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[k.rem_euclid(order as i64) as usize] = BigRational::one();
        z
    }

    /// `re + i im`, embedded at order 4 (or a multiple of it).
    pub fn gaussian(order: u64, re: BigRational, im: BigRational) -> Self {
        assert!(order % 4 == 0, "gaussian rationals need 4 | order");
        let mut z = Self::zero(order);
        z.coeffs[0] = re;
        z.coeffs[(order / 4) as usize] = im;
        z
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Same element viewed in `Q(zeta_m)` for a multiple `m` of the order.
    pub fn lift(&self, m: u64) -> Self {
        assert!(m % self.order == 0);
        let step = (m / self.order) as usize;
        let mut z = Self::zero(m);
        for (i, c) in self.coeffs.iter().enumerate() {
            z.coeffs[i * step] = c.clone();
        }
        z
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        if self.order == other.order {
            return (self.clone(), other.clone());
        }
        let m = num_integer::lcm(self.order, other.order);
        (self.lift(m), other.lift(m))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = self.aligned(other);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x += y;
        }
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (mut a, b) = self.aligned(other);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x -= y;
        }
        a
    }

    pub fn add_assign(&mut self, other: &Self) {
        if self.order == other.order {
            for (x, y) in self.coeffs.iter_mut().zip(other.coeffs.iter()) {
                *x += y;
            }
        } else {
            *self = self.add(other);
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let n = a.order as usize;
        let mut out = Self::zero(a.order);
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    out.coeffs[(i + j) % n] += x * y;
                }
            }
        }
        out
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplication by `zeta_order^k`, a rotation.
    pub fn mul_root(&self, k: i64) -> Self {
        let n = self.order as i64;
        let mut out = Self::zero(self.order);
        for (i, c) in self.coeffs.iter().enumerate() {
            out.coeffs[(i as i64 + k).rem_euclid(n) as usize] = c.clone();
        }
        out
    }

    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut out = Self::zero(self.order);
        for (i, c) in self.coeffs.iter().enumerate() {
            out.coeffs[(n - i) % n] = c.clone();
        }
        out
    }

    /// Canonical remainder modulo the cyclotomic polynomial.
    pub fn reduced(&self) -> Vec<BigRational> {
        let phi = cyclotomic_poly(self.order);
        let dm = phi.len() - 1;
        let mut r = self.coeffs.clone();
        for k in (dm..r.len()).rev() {
            let c = r[k].clone();
            if c.is_zero() {
                continue;
            }
            for (i, pi) in phi.iter().enumerate() {
                let idx = k - dm + i;
                r[idx] -= &c * BigRational::from_integer(pi.clone());
            }
        }
        r.truncate(dm);
        r
    }

    pub fn is_zero(&self) -> bool {
        if self.coeffs.iter().all(|c| c.is_zero()) {
            return true;
        }
        self.reduced().iter().all(|c| c.is_zero())
    }

    pub fn eq_exact(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// The element as a rational number, if it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        let r = self.reduced();
        if r.iter().skip(1).all(|c| c.is_zero()) {
            Some(r.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    /// `(re, im)` if the element lies in `Q(i)`.
    pub fn as_gaussian(&self) -> Option<(BigRational, BigRational)> {
        let m = num_integer::lcm(self.order, 4);
        let lifted = self.lift(m);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let re = lifted.add(&lifted.conj()).scale(&half).as_rational()?;
        let i = Cyclotomic::gaussian(m, BigRational::zero(), BigRational::one());
        let im = lifted.sub(&lifted.conj()).mul(&i).scale(&-half).as_rational()?;
        Some((re, im))
    }

    pub fn to_complex<T: Real>(&self) -> Cx<T> {
        let two_pi = T::pi() * T::from_i64(2);
        let mut acc = Cx::new(T::zero(), T::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let w = cis(&(two_pi.clone() * T::from_i64(k as i64) / T::from_i64(self.order as i64)));
            let cr = rational_to_real::<T>(c);
            acc = acc + Cx::new(w.re * cr.clone(), w.im * cr);
        }
        acc
    }
}

pub(crate) fn rational_to_real<T: Real>(r: &BigRational) -> T {
    T::from_ratio(r)
}
