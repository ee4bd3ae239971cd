//! Integer polynomials: exact evaluation, discriminants, Sturm counting,
//! and roots modulo prime powers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::prime::{add_mod, gcd, inv_mod, is_prime, mul_mod};
use crate::error::{Error, Result};

/// Polynomial with integer coefficients, stored ascending (`coeffs[i]` is the
/// coefficient of `x^i`), with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    /// From coefficients listed highest degree first, `c_d, ..., c_0`.
    pub fn from_descending(c: &[i64]) -> Self {
        let mut coeffs: Vec<i64> = c.iter().rev().copied().collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_ascending(c: &[i64]) -> Self {
        let mut coeffs = c.to_vec();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn ascending(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn descending(&self) -> Vec<i64> {
        self.coeffs.iter().rev().copied().collect()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> i64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn content(&self) -> u128 {
        self.coeffs
            .iter()
            .fold(0u128, |g, &c| gcd(g, c.unsigned_abs() as u128))
    }

    /// `P(-x)`.
    pub fn reflect(&self) -> IntPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 1 { -c } else { c })
            .collect();
        IntPoly { coeffs }
    }

    pub fn derivative(&self) -> IntPoly {
        let coeffs: Vec<i64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * i as i64)
            .collect();
        IntPoly::from_ascending(&coeffs)
    }

    pub fn eval_big(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + BigInt::from(c);
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(BigInt::from(c));
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
    }

    /// Residue of `P(x)` modulo `m`, with `x` already reduced.
    pub fn eval_mod(&self, x: u128, m: u128) -> u128 {
        let mut acc = 0u128;
        for &c in self.coeffs.iter().rev() {
            acc = add_mod(mul_mod(acc, x, m), reduce_i64(c, m), m);
        }
        acc
    }

    /// Coefficients reduced modulo `p`, ascending, trimmed.
    pub fn reduce_mod(&self, p: u128) -> Vec<u128> {
        let mut v: Vec<u128> = self.coeffs.iter().map(|&c| reduce_i64(c, p)).collect();
        trim(&mut v);
        v
    }

    /// Discriminant, `(-1)^{d(d-1)/2} Res(P, P') / c_d`.
    pub fn discriminant(&self) -> BigInt {
        let d = self.degree();
        if d == 0 {
            return BigInt::one();
        }
        let res = resultant(&self.coeffs, &self.derivative().coeffs);
        let mut disc = res / BigInt::from(self.leading());
        if (d * (d - 1) / 2) % 2 == 1 {
            disc = -disc;
        }
        disc
    }

    /// Number of distinct real roots in the half-open interval `(l, u]`.
    pub fn count_real_roots(&self, l: &BigRational, u: &BigRational) -> usize {
        let seq = self.sturm_sequence();
        let vl = sign_changes(&seq, l);
        let vu = sign_changes(&seq, u);
        vl.saturating_sub(vu)
    }

    fn sturm_sequence(&self) -> Vec<Vec<BigRational>> {
        let to_q = |c: &[i64]| -> Vec<BigRational> {
            c.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        };
        let mut seq = vec![to_q(&self.coeffs), to_q(&self.derivative().coeffs)];
        loop {
            let n = seq.len();
            if seq[n - 1].is_empty() {
                seq.pop();
                break;
            }
            let r = qpoly_rem(&seq[n - 2], &seq[n - 1]);
            if r.is_empty() {
                break;
            }
            seq.push(r.into_iter().map(|c| -c).collect());
        }
        seq
    }

    /// Whether a rational root exists (rational root theorem). Meant for
    /// small constant and leading coefficients.
    pub fn has_rational_root(&self) -> bool {
        if self.coeffs.first() == Some(&0) {
            return true;
        }
        let c0 = self.coeffs[0].unsigned_abs();
        let cd = self.leading().unsigned_abs();
        for num in crate::arith::prime::divisors(c0) {
            for den in crate::arith::prime::divisors(cd) {
                for sign in [1i64, -1] {
                    let x = BigRational::new(
                        BigInt::from(sign * num as i64),
                        BigInt::from(den as i64),
                    );
                    if self.eval_rational(&x).is_zero() {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Degrees of the irreducible factors of `P mod p`, assuming `p` does not
    /// divide the leading coefficient or the discriminant (squarefree case).
    pub fn factor_degrees_mod(&self, p: u128) -> Vec<usize> {
        let f = monic(&self.reduce_mod(p), p);
        let mut degrees = Vec::new();
        let mut rest = f;
        let x = vec![0, 1];
        let mut xp = x.clone();
        let mut k = 1;
        while rest.len() > 1 {
            if 2 * k > rest.len() - 1 {
                degrees.push(rest.len() - 1);
                break;
            }
            xp = pow_poly_mod(&xp, p, &rest, p);
            let mut h = sub(&xp, &x, p);
            trim(&mut h);
            let g = poly_gcd(&rest, &h, p);
            let gd = g.len() - 1;
            if gd > 0 {
                for _ in 0..gd / k {
                    degrees.push(k);
                }
                rest = poly_divexact(&rest, &g, p);
                xp = poly_rem(&xp, &rest, p);
            }
            k += 1;
        }
        degrees.sort_unstable();
        degrees
    }

    /// Irreducibility over the rationals for degrees 2 to 4.
    ///
    /// Degrees 2 and 3 are irreducible iff no rational root exists. For
    /// degree 4 one also needs to exclude a product of two quadratics, which
    /// is done by finding a good prime whose factorization pattern is `{4}`
    /// or `{1, 3}`.
    pub fn certify_irreducible(&self) -> Result<()> {
        let d = self.degree();
        if !(2..=4).contains(&d) {
            return Err(Error::IrreducibilityUnproven(format!(
                "degree {d} outside 2..=4"
            )));
        }
        if self.content() != 1 {
            return Err(Error::InvalidInput("polynomial content must be 1".into()));
        }
        let c0 = self.coeffs[0].unsigned_abs();
        let cd = self.leading().unsigned_abs();
        if c0 > 1_000_000 || cd > 1_000_000 {
            return Err(Error::IrreducibilityUnproven(
                "coefficients too large for the rational root test".into(),
            ));
        }
        if self.has_rational_root() {
            return Err(Error::InvalidInput("polynomial has a rational root".into()));
        }
        if d < 4 {
            return Ok(());
        }
        let disc = self.discriminant();
        let lead = BigInt::from(self.leading());
        let mut p = 2u128;
        while p < 2000 {
            if is_prime(p)
                && !(&disc % BigInt::from(p)).is_zero()
                && !(&lead % BigInt::from(p)).is_zero()
            {
                let pattern = self.factor_degrees_mod(p);
                if pattern == [4] || pattern == [1, 3] {
                    return Ok(());
                }
            }
            p += 1;
        }
        Err(Error::IrreducibilityUnproven(
            "no prime below 2000 excludes a quadratic factorization".into(),
        ))
    }
}

fn reduce_i64(c: i64, m: u128) -> u128 {
    let r = (c.unsigned_abs() as u128) % m;
    if c < 0 && r != 0 {
        m - r
    } else {
        r
    }
}

fn trim(v: &mut Vec<u128>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn sub(a: &[u128], b: &[u128], p: u128) -> Vec<u128> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            add_mod(x, (p - y) % p, p)
        })
        .collect()
}

fn monic(a: &[u128], p: u128) -> Vec<u128> {
    let lead = *a.last().expect("nonzero polynomial");
    let inv = inv_mod(lead, p).expect("prime modulus");
    a.iter().map(|&c| mul_mod(c, inv, p)).collect()
}

fn poly_mul(a: &[u128], b: &[u128], p: u128) -> Vec<u128> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    trim(&mut out);
    out
}

fn poly_rem(a: &[u128], m: &[u128], p: u128) -> Vec<u128> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let inv = inv_mod(m[dm], p).expect("prime modulus");
    while r.len() > dm {
        let k = r.len() - 1 - dm;
        let c = mul_mod(*r.last().unwrap(), inv, p);
        for (i, &mi) in m.iter().enumerate() {
            let t = mul_mod(c, mi, p);
            r[k + i] = add_mod(r[k + i], (p - t) % p, p);
        }
        trim(&mut r);
    }
    r
}

fn poly_divexact(a: &[u128], m: &[u128], p: u128) -> Vec<u128> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let inv = inv_mod(m[dm], p).expect("prime modulus");
    let mut q = vec![0u128; a.len() - dm];
    while r.len() > dm {
        let k = r.len() - 1 - dm;
        let c = mul_mod(*r.last().unwrap(), inv, p);
        q[k] = c;
        for (i, &mi) in m.iter().enumerate() {
            let t = mul_mod(c, mi, p);
            r[k + i] = add_mod(r[k + i], (p - t) % p, p);
        }
        r.pop();
        trim(&mut r);
        if r.len() <= dm {
            break;
        }
    }
    q
}

fn poly_gcd(a: &[u128], b: &[u128], p: u128) -> Vec<u128> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

fn pow_poly_mod(base: &[u128], mut e: u128, m: &[u128], p: u128) -> Vec<u128> {
    let mut acc = vec![1u128];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &b, p), m, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

/// Distinct roots of a squarefree product of linear factors (equal-degree
/// splitting with shifts `x + a`, `a = 0, 1, 2, ...`).
fn split_linear(f: &[u128], p: u128, out: &mut Vec<u128>) {
    let d = f.len() - 1;
    if d == 0 {
        return;
    }
    if d == 1 {
        let f = monic(f, p);
        out.push((p - f[0]) % p);
        return;
    }
    let mut a = 0u128;
    loop {
        let h = pow_poly_mod(&[a, 1], (p - 1) / 2, f, p);
        let g = poly_gcd(f, &sub(&h, &[1], p), p);
        let gd = g.len() - 1;
        if gd > 0 && gd < d {
            split_linear(&g, p, out);
            split_linear(&poly_divexact(f, &g, p), p, out);
            return;
        }
        a += 1;
    }
}

const SCAN_LIMIT: u128 = 50_000;

/// Roots of `P` modulo the prime `p`, ascending.
pub fn roots_mod_prime(poly: &IntPoly, p: u128) -> Result<Vec<u128>> {
    let f = poly.reduce_mod(p);
    if f.is_empty() {
        return Err(Error::ZeroPolynomialModP { p });
    }
    if p <= SCAN_LIMIT {
        return Ok((0..p).filter(|&x| poly.eval_mod(x, p) == 0).collect());
    }
    if f.len() == 1 {
        return Ok(Vec::new());
    }
    let f = monic(&f, p);
    let xp = pow_poly_mod(&[0, 1], p, &f, p);
    let g = poly_gcd(&f, &sub(&xp, &[0, 1], p), p);
    let mut out = Vec::new();
    if g.len() > 1 {
        if g[0] == 0 {
            out.push(0);
            let g0 = poly_divexact(&g, &[0, 1], p);
            split_linear(&g0, p, &mut out);
        } else {
            split_linear(&g, p, &mut out);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Hensel lift of a simple root `r` modulo `p` to modulus `p^v`.
pub fn hensel_lift(poly: &IntPoly, p: u128, r: u128, v: u32) -> Result<u128> {
    let der = poly.derivative();
    let d = der.eval_mod(r, p);
    if d == 0 {
        return Err(Error::NonSimpleRoot { p, root: r, v });
    }
    let inv = inv_mod(d, p).expect("prime modulus");
    let mut x = r;
    let mut pk = p;
    for _ in 1..v {
        pk = pk
            .checked_mul(p)
            .ok_or_else(|| Error::Overflow(format!("{p}^{v}")))?;
        // x is a root mod pk/p; correct by a multiple of pk/p
        let fx = poly.eval_mod(x, pk);
        let step = pk / p;
        debug_assert_eq!(fx % step, 0);
        let t = (fx / step) % p;
        let c = mul_mod(t, inv, p);
        x = (x + (p - c) % p * step) % pk;
    }
    Ok(x)
}

/// All `x` in `[0, p^v)` with `P(x) = 0 mod p^v`, ascending.
///
/// Roots modulo `p` that are simple lift uniquely; a multiple root with
/// `v > 1` is reported as `NonSimpleRoot`.
pub fn poly_roots_mod_prime_power(poly: &IntPoly, p: u128, v: u32) -> Result<Vec<u128>> {
    if v == 0 {
        return Err(Error::InvalidInput("exponent must be at least 1".into()));
    }
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let roots = roots_mod_prime(poly, p)?;
    if v == 1 {
        return Ok(roots);
    }
    let mut out = roots
        .into_iter()
        .map(|r| hensel_lift(poly, p, r, v))
        .collect::<Result<Vec<_>>>()?;
    out.sort_unstable();
    Ok(out)
}

fn qpoly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap() / &b[db];
        for (i, bi) in b.iter().enumerate() {
            r[k + i] = &r[k + i] - &c * bi;
        }
        r.pop();
        while r.last().map_or(false, |x| x.is_zero()) {
            r.pop();
        }
    }
    r
}

fn sign_changes(seq: &[Vec<BigRational>], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for poly in seq {
        let mut acc = BigRational::zero();
        for c in poly.iter().rev() {
            acc = acc * x + c;
        }
        let s = if acc.is_positive() {
            1
        } else if acc.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Resultant via the Sylvester matrix and fraction-free elimination.
fn resultant(a: &[i64], b: &[i64]) -> BigInt {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, &c) in a.iter().rev().enumerate() {
            mat[i][i + j] = BigInt::from(c);
        }
    }
    for i in 0..m {
        for (j, &c) in b.iter().rev().enumerate() {
            mat[n + i][i + j] = BigInt::from(c);
        }
    }
    bareiss_det(mat)
}

fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v.div_floor(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Exact `|P(-n)|` as `u128`, or `Overflow` beyond `2^127`.
pub fn abs_value_at_neg(poly: &IntPoly, n: u64) -> Result<u128> {
    let v = poly.eval_big(&-BigInt::from(n)).abs();
    v.to_u128()
        .filter(|&x| x < (1u128 << 127))
        .ok_or_else(|| Error::Overflow(format!("|P(-{n})| exceeds 2^127")))
}
