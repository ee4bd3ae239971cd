//! Placing vectors of prescribed lengths end to end so that they sum to a
//! prescribed point.

use crate::complex::{self, Cx};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `[max(0, 2 max - sum), sum]` for the given lengths.
fn annulus<T: Real>(radii: &[T]) -> (T, T) {
    let sum = radii.iter().fold(T::zero(), |a, r| a + r.clone());
    let max = radii.iter().fold(T::zero(), |a, r| a.max_of(r.clone()));
    ((T::from_i64(2) * max - sum.clone()).max_of(T::zero()), sum)
}

/// Angles `theta_i` with `sum r_i e^{i theta_i} = z`, returned in the order of
/// `radii`. Links are placed longest first; each one is turned so that the
/// remaining gap stays inside the annulus the remaining links can reach.
pub fn bohr_solve<T: Real>(radii: &[T], z: &Cx<T>) -> Result<Vec<T>> {
    if radii.is_empty() || radii.iter().any(|r| r <= &T::zero()) {
        return Err(Error::InvalidInput("radii must be positive and nonempty".into()));
    }
    let (inner, outer) = annulus(radii);
    let za = complex::abs(z);
    let slack = T::from_f64(1e-12) * outer.clone();
    if za.clone() + slack.clone() < inner || za.clone() > outer.clone() + slack {
        return Err(Error::Unreachable { target: za.to_f64(), inner: inner.to_f64(), outer: outer.to_f64() });
    }

    let mut order: Vec<usize> = (0..radii.len()).collect();
    order.sort_by(|&a, &b| radii[b].partial_cmp(&radii[a]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
    let sorted: Vec<T> = order.iter().map(|&i| radii[i].clone()).collect();

    let mut angles = vec![T::zero(); radii.len()];
    let mut v = z.clone();
    let two = T::from_i64(2);
    for (step, &idx) in order.iter().enumerate() {
        let r = sorted[step].clone();
        let va = complex::abs(&v);
        let phase_v = if va.is_zero() { T::zero() } else { complex::arg(&v) };
        let theta = if step + 1 == order.len() {
            phase_v
        } else {
            // distance d = |v - r e^{i theta}| must reach the rest's annulus
            let (lo_rest, hi_rest) = annulus(&sorted[step + 1..]);
            let lo = lo_rest.max_of((va.clone() - r.clone()).abs());
            let hi = hi_rest.min_of(va.clone() + r.clone());
            let d = (lo + hi) / two.clone();
            if va.is_zero() {
                T::zero()
            } else {
                let cos = (va.clone() * va.clone() + r.clone() * r.clone() - d.clone() * d)
                    / (two.clone() * va.clone() * r.clone());
                let cos = cos.max_of(-T::one()).min_of(T::one());
                let sin = (T::one() - cos.clone() * cos.clone()).max_of(T::zero()).sqrt();
                phase_v + sin.atan2(&cos)
            }
        };
        v = v - complex::scale(&complex::cis(&theta), &r);
        angles[idx] = theta;
    }
    Ok(angles)
}
