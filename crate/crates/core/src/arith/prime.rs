//! Primality and integer factorization below 2^128.
//!
//! Miller-Rabin with the first twelve prime bases is deterministic below
//! 2^64 (indeed below 3.3e24); above that forty extra bases drawn from a
//! generator seeded by `n` itself are added, so results stay reproducible.
//! Splitting uses Pollard rho with Brent's cycle detection.

use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const TRIAL_LIMIT: u64 = 1000;
const EXTRA_BASES: usize = 40;

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    debug_assert!(a < m && b < m);
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

pub fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    let (mut a, mut b) = (a % m, b % m);
    if a < b {
        std::mem::swap(&mut a, &mut b);
    }
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

pub fn pow_mod(mut base: u128, mut e: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u128, m: u128) -> Option<u128> {
    if m > i128::MAX as u128 {
        return None;
    }
    let (mut old_r, mut r) = ((a % m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u128)
}

fn strong_probable_prime(n: u128, a: u128, d: u128, s: u32) -> bool {
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
        if x == 1 {
            return false;
        }
    }
    false
}

pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        let p = p as u128;
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    if !SMALL_PRIMES
        .iter()
        .all(|&a| strong_probable_prime(n, a as u128, d, s))
    {
        return false;
    }
    if n <= u64::MAX as u128 {
        return true;
    }
    let mut rng = ChaCha8Rng::seed_from_u64((n ^ (n >> 64)) as u64);
    (0..EXTRA_BASES).all(|_| {
        let a = rng.gen_range(2..n - 1);
        strong_probable_prime(n, a, d, s)
    })
}

/// Nontrivial factor of an odd composite `n` via Brent's variant of rho.
fn brent_factor(n: u128) -> u128 {
    let mut c = 1u128;
    loop {
        let f = |x: u128| add_mod(mul_mod(x, x, n), c % n, n);
        let mut y = 2u128 % n;
        let mut r = 1u64;
        let mut q = 1u128;
        let m = 128u64;
        let mut g = 1u128;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    let diff = if x > y { x - y } else { y - x };
                    q = mul_mod(q, diff, n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                let diff = if x > ys { x - ys } else { ys - x };
                g = gcd(diff, n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Complete factorization `target = prod p^e`, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub target: u128,
    pub factors: Vec<(u128, u32)>,
}

impl Factorization {
    pub fn recompose(&self) -> Option<u128> {
        self.factors.iter().try_fold(1u128, |acc, &(p, e)| {
            (0..e).try_fold(acc, |a, _| a.checked_mul(p))
        })
    }

    pub fn is_valid(&self) -> bool {
        self.recompose() == Some(self.target)
            && self.factors.windows(2).all(|w| w[0].0 < w[1].0)
            && self.factors.iter().all(|&(p, e)| e > 0 && is_prime(p))
    }

    pub fn exponent_of(&self, p: u128) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| format!("{p}^{e}"))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub fn factorize(n: u128) -> Factorization {
    assert!(n >= 1, "factorize expects n >= 1");
    let mut primes: Vec<u128> = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p <= TRIAL_LIMIT && (p as u128) * (p as u128) <= m {
        while m % p as u128 == 0 {
            primes.push(p as u128);
            m /= p as u128;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        let mut stack = vec![m];
        while let Some(x) = stack.pop() {
            if x == 1 {
                continue;
            }
            if is_prime(x) {
                primes.push(x);
                continue;
            }
            if let Some(r) = perfect_square_root(x) {
                stack.push(r);
                stack.push(r);
                continue;
            }
            let d = brent_factor(x);
            stack.push(d);
            stack.push(x / d);
        }
    }
    primes.sort_unstable();
    let mut factors: Vec<(u128, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Factorization { target: n, factors }
}

fn perfect_square_root(x: u128) -> Option<u128> {
    let mut r = (x as f64).sqrt() as u128;
    while r.checked_mul(r).is_none_or(|v| v > x) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|v| v <= x) {
        r += 1;
    }
    (r * r == x).then_some(r)
}

/// Distinct prime divisors of a small integer.
pub fn prime_divisors(n: u128) -> Vec<u128> {
    if n <= 1 {
        return Vec::new();
    }
    factorize(n).factors.into_iter().map(|(p, _)| p).collect()
}

/// All positive divisors, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    for p in prime_divisors(n as u128) {
        let p = p as u64;
        result = result / p * (p - 1);
    }
    result
}

/// Moebius function.
pub fn moebius(n: u64) -> i32 {
    if n == 1 {
        return 1;
    }
    let f = factorize(n as u128);
    if f.factors.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a as u128, b as u128) as u64 * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_division(mut n: u128) -> Vec<(u128, u32)> {
        let mut out = Vec::new();
        let mut p = 2u128;
        while p * p <= n {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            p += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn documented_examples() {
        assert!(factorize(1).factors.is_empty());
        assert_eq!(factorize(9998).factors, vec![(2, 1), (4999, 1)]);
        assert_eq!(factorize(10199).factors, vec![(7, 1), (31, 1), (47, 1)]);
        assert_eq!(trial_division(9998), vec![(2, 1), (4999, 1)]);
        assert_eq!(trial_division(10199), vec![(7, 1), (31, 1), (47, 1)]);
    }

    #[test]
    fn agrees_with_trial_division_small() {
        for n in 1..5000u128 {
            assert_eq!(factorize(n).factors, trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn large_semiprimes_and_powers() {
        let p = 4_294_967_311u128; // next prime after 2^32
        let q = 4_294_967_357u128;
        let f = factorize(p * q);
        assert_eq!(f.factors, vec![(p, 1), (q, 1)]);
        let f = factorize(p * p * 3);
        assert_eq!(f.factors, vec![(3, 1), (p, 2)]);
        let big = (1u128 << 89) - 1; // Mersenne prime
        assert!(is_prime(big));
        let f = factorize(big * 5);
        assert_eq!(f.factors, vec![(5, 1), (big, 1)]);
    }

    #[test]
    fn mersenne_composites() {
        // 2^67 - 1 = 193707721 * 761838257287
        let n = (1u128 << 67) - 1;
        let f = factorize(n);
        assert_eq!(f.factors, vec![(193_707_721, 1), (761_838_257_287, 1)]);
        assert!(f.is_valid());
    }

    #[test]
    fn carmichael_and_strong_pseudoprimes_rejected() {
        for n in [561u128, 1105, 1729, 2047, 3_215_031_751, 3_825_123_056_546_413_051] {
            assert!(!is_prime(n), "{n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557)); // largest 64-bit prime
    }

    #[test]
    fn arithmetic_helpers() {
        assert_eq!(euler_phi(12), 4);
        assert_eq!(moebius(30), -1);
        assert_eq!(moebius(12), 0);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
        let m = (1u128 << 100) + 277;
        assert_eq!(mul_mod(m - 1, m - 1, m), 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn recomposition_u64(n in 1u64..) {
            let f = factorize(n as u128);
            prop_assert!(f.is_valid());
        }

        #[test]
        fn recomposition_u80(n in 1u128..(1u128 << 80)) {
            let f = factorize(n);
            prop_assert_eq!(f.recompose(), Some(n));
        }
    }
}
