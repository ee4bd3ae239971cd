//! Dirichlet characters modulo `k`.
//!
//! The unit group `(Z/k)^*` is split by CRT into prime-power parts, each of
//! which is cyclic (odd `p`) or `<-1> x <5>` (powers of 2). A character is a
//! vector of exponents against those generators; values are stored as
//! indices `e` meaning `exp(2 pi i e / order)` with `order` the exponent of
//! the group.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::cyclotomic::Cyclotomic;
use crate::arith::prime::{divisors, euler_phi, factorize, gcd, lcm, pow_mod};
use crate::complex::{cis, Cx};
use crate::scalar::Real;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u64,
    /// `values[m]` is `Some(e)` for `gcd(m, k) = 1`, else `None`.
    values: Vec<Option<u64>>,
    conductor: u64,
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi(mod {}, cond {}, [", self.modulus, self.conductor)?;
        for (m, v) in self.values.iter().enumerate() {
            if let Some(e) = v {
                write!(f, " {m}:{e}/{}", self.order)?;
            }
        }
        write!(f, " ])")
    }
}

struct Component {
    /// prime power modulus
    pk: u64,
    /// (generator, order) pairs
    gens: Vec<(u64, u64)>,
}

fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let qs: Vec<u64> = factorize((p - 1) as u128)
        .factors
        .iter()
        .map(|&(q, _)| q as u64)
        .collect();
    (2..p)
        .find(|&g| qs.iter().all(|&q| pow_mod(g as u128, ((p - 1) / q) as u128, p as u128) != 1))
        .expect("primitive root exists")
}

fn components(k: u64) -> Vec<Component> {
    let mut out = Vec::new();
    for (p, e) in factorize(k as u128).factors {
        let p = p as u64;
        let pk = p.pow(e);
        if p == 2 {
            let gens = match e {
                1 => vec![],
                2 => vec![(3, 2)],
                _ => vec![(pk - 1, 2), (5, pk / 4)],
            };
            out.push(Component { pk, gens });
        } else {
            let mut g = primitive_root(p);
            // a primitive root mod p^2 is one mod every p^e
            if e > 1 && pow_mod(g as u128, (p - 1) as u128, (p * p) as u128) == 1 {
                g += p;
            }
            out.push(Component { pk, gens: vec![(g, pk / p * (p - 1))] });
        }
    }
    out
}

/// Discrete-log coordinates of every unit modulo a component.
fn component_logs(c: &Component) -> Vec<Option<Vec<u64>>> {
    let mut logs = vec![None; c.pk as usize];
    match c.gens.len() {
        0 => logs[1 % c.pk as usize] = Some(vec![]),
        1 => {
            let (g, ord) = c.gens[0];
            let mut x = 1u64;
            for e in 0..ord {
                logs[x as usize] = Some(vec![e]);
                x = x * g % c.pk;
            }
        }
        _ => {
            let (g0, o0) = c.gens[0];
            let (g1, o1) = c.gens[1];
            let mut a = 1u64;
            for e0 in 0..o0 {
                let mut x = a;
                for e1 in 0..o1 {
                    logs[x as usize] = Some(vec![e0, e1]);
                    x = x * g1 % c.pk;
                }
                a = a * g0 % c.pk;
            }
        }
    }
    logs
}

impl DirichletCharacter {
    pub fn principal(k: u64) -> Self {
        let values = (0..k)
            .map(|m| if gcd(m as u128, k as u128) == 1 { Some(0) } else { None })
            .collect();
        DirichletCharacter { modulus: k, order: 1, values, conductor: 1 }
    }

    fn from_table(modulus: u64, order: u64, values: Vec<Option<u64>>) -> Self {
        let mut chi = DirichletCharacter { modulus, order, values, conductor: modulus };
        chi.normalize_order();
        chi.conductor = chi.compute_conductor();
        chi
    }

    /// Shrinks `order` to the true order of the character.
    fn normalize_order(&mut self) {
        let g = self
            .values
            .iter()
            .flatten()
            .fold(self.order as u128, |g, &e| gcd(g, e as u128)) as u64;
        if g > 1 {
            self.order /= g;
            for e in self.values.iter_mut().flatten() {
                *e /= g;
            }
        }
    }

    fn compute_conductor(&self) -> u64 {
        let k = self.modulus;
        for d in divisors(k) {
            let trivial = (0..k)
                .filter(|&m| m % d == 1 % d)
                .all(|m| matches!(self.values[m as usize], Some(0) | None));
            if trivial {
                return d;
            }
        }
        k
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    pub fn is_principal(&self) -> bool {
        self.order == 1
    }

    /// Root-of-unity index of `chi(m)` over [`order`](Self::order), or `None`
    /// when `gcd(m, k) > 1`.
    pub fn index(&self, m: i64) -> Option<u64> {
        self.values[m.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn is_real(&self) -> bool {
        self.order <= 2
    }

    /// `chi(m)` as an exact cyclotomic number of the given order (a multiple
    /// of the character order).
    pub fn exact(&self, m: i64, order: u64) -> Cyclotomic {
        match self.index(m) {
            None => Cyclotomic::zero(order),
            Some(e) => Cyclotomic::root(order, (e * (order / self.order)) as i64),
        }
    }

    pub fn value<T: Real>(&self, m: i64) -> Cx<T> {
        match self.index(m) {
            None => Cx::new(T::zero(), T::zero()),
            Some(0) => Cx::new(T::one(), T::zero()),
            Some(e) => {
                let theta = T::pi() * T::from_i64(2 * e as i64) / T::from_i64(self.order as i64);
                cis(&theta)
            }
        }
    }

    /// Real values `0, +-1` of a real character.
    pub fn real_value(&self, m: i64) -> Option<i64> {
        if !self.is_real() {
            return None;
        }
        Some(match self.index(m) {
            None => 0,
            Some(0) => 1,
            Some(_) => -1,
        })
    }

    pub fn conj(&self) -> Self {
        let values = self.values.iter().map(|v| v.map(|e| (self.order - e) % self.order)).collect();
        DirichletCharacter { values, ..self.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus);
        let order = lcm(self.order, other.order);
        let (sa, sb) = (order / self.order, order / other.order);
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some((a * sa + b * sb) % order),
                _ => None,
            })
            .collect();
        Self::from_table(self.modulus, order, values)
    }

    /// The primitive character modulo the conductor inducing this one.
    pub fn primitive_inducing(&self) -> Self {
        let d = self.conductor;
        if d == self.modulus {
            return self.clone();
        }
        let k = self.modulus;
        let values = (0..d)
            .map(|m| {
                if gcd(m as u128, d as u128) != 1 {
                    return None;
                }
                // some lift m + t d is coprime to k; its value is independent
                // of the lift because chi is trivial on 1 + dZ
                let lift = (0..k / d)
                    .map(|t| m + t * d)
                    .find(|&x| gcd(x as u128, k as u128) == 1)
                    .expect("coprime lift exists");
                self.values[lift as usize]
            })
            .collect();
        let mut chi = DirichletCharacter { modulus: d, order: self.order, values, conductor: d };
        chi.normalize_order();
        chi
    }

    /// The character modulo a multiple `k'` of the modulus induced by this one.
    pub fn induce(&self, k: u64) -> Self {
        assert!(k % self.modulus == 0);
        let values = (0..k)
            .map(|m| {
                if gcd(m as u128, k as u128) != 1 {
                    None
                } else {
                    self.values[(m % self.modulus) as usize]
                }
            })
            .collect();
        DirichletCharacter { modulus: k, order: self.order, values, conductor: self.conductor }
    }

    /// Parity: `chi(-1) = 1` gives `false`, `chi(-1) = -1` gives `true`.
    pub fn is_odd(&self) -> bool {
        self.index(-1).map_or(false, |e| e != 0)
    }
}

/// All `phi(k)` characters modulo `k`, principal first, in a fixed order.
pub fn characters_mod(k: u64) -> Vec<DirichletCharacter> {
    assert!(k >= 1);
    if k == 1 {
        return vec![DirichletCharacter::principal(1)];
    }
    let comps = components(k);
    let logs: Vec<_> = comps.iter().map(component_logs).collect();
    let gen_orders: Vec<u64> = comps.iter().flat_map(|c| c.gens.iter().map(|g| g.1)).collect();
    let order = gen_orders.iter().fold(1u64, |a, &b| lcm(a, b));
    // exponent vectors ranging over the product of cyclic groups
    let total: u64 = gen_orders.iter().product();
    let mut out = Vec::with_capacity(total as usize);
    for idx in 0..total {
        let mut exps = Vec::with_capacity(gen_orders.len());
        let mut rest = idx;
        for &o in &gen_orders {
            exps.push(rest % o);
            rest /= o;
        }
        let values = (0..k)
            .map(|m| {
                if gcd(m as u128, k as u128) != 1 {
                    return None;
                }
                let mut e = 0u64;
                let mut slot = 0;
                for (c, table) in comps.iter().zip(&logs) {
                    let coords = table[(m % c.pk) as usize].as_ref().expect("unit has a log");
                    for (&x, &(_, o)) in coords.iter().zip(&c.gens) {
                        e = (e + exps[slot] * x * (order / o)) % order;
                        slot += 1;
                    }
                }
                Some(e)
            })
            .collect();
        out.push(DirichletCharacter::from_table(k, order, values));
    }
    debug_assert_eq!(out.len() as u64, euler_phi(k));
    out
}

/// All primitive characters of conductor exactly `d`.
pub fn primitive_characters(d: u64) -> Vec<DirichletCharacter> {
    characters_mod(d).into_iter().filter(|c| c.is_primitive()).collect()
}

/// Exact `sum_{m mod k} chi_a(m) conj(chi_b(m))`.
pub fn inner_product(a: &DirichletCharacter, b: &DirichletCharacter) -> Cyclotomic {
    let order = lcm(a.order, b.order);
    let mut acc = Cyclotomic::zero(order);
    let bc = b.conj();
    for m in 0..a.modulus as i64 {
        if let (Some(_), Some(_)) = (a.index(m), bc.index(m)) {
            acc.add_assign(&a.exact(m, order).mul(&bc.exact(m, order)));
        }
    }
    acc
}

impl DirichletCharacter {
    /// Whether the exact table of `self` equals that of `other`.
    pub fn same_as(&self, other: &Self) -> bool {
        self.modulus == other.modulus
            && (0..self.modulus as i64).all(|m| match (self.index(m), other.index(m)) {
                (None, None) => true,
                (Some(a), Some(b)) => a * other.order == b * self.order,
                _ => false,
            })
    }

    /// Sum over a full period, zero unless principal.
    pub fn period_sum_is_zero(&self) -> bool {
        let mut acc = Cyclotomic::zero(self.order);
        for m in 0..self.modulus as i64 {
            acc.add_assign(&self.exact(m, self.order));
        }
        acc.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    #[test]
    fn small_moduli() {
        let c1 = characters_mod(1);
        assert_eq!(c1.len(), 1);
        assert_eq!(c1[0].conductor(), 1);

        let c3 = characters_mod(3);
        assert_eq!(c3.len(), 2);
        assert!(c3[0].is_principal());
        assert_eq!(c3[1].conductor(), 3);
        assert_eq!(c3[1].real_value(2), Some(-1));

        let c6 = characters_mod(6);
        assert_eq!(c6.len(), 2);
        let nontrivial = c6.iter().find(|c| !c.is_principal()).unwrap();
        assert_eq!(nontrivial.conductor(), 3);
        assert!(nontrivial.primitive_inducing().same_as(&c3[1]));
        for m in [1i64, 5] {
            assert_eq!(nontrivial.real_value(m), c3[1].real_value(m));
        }
    }

    #[test]
    fn counts_and_conductors() {
        for k in 1..=60u64 {
            let chars = characters_mod(k);
            assert_eq!(chars.len() as u64, euler_phi(k), "k = {k}");
            for (i, a) in chars.iter().enumerate() {
                assert_eq!(a.modulus() % a.conductor(), 0);
                assert_eq!(a.index(1), Some(0));
                for b in &chars[i + 1..] {
                    assert!(!a.same_as(b));
                }
            }
        }
        // primitive characters: none of conductor 2 or 6 mod 2
        assert_eq!(primitive_characters(2).len(), 0);
        assert_eq!(primitive_characters(4).len(), 1);
        assert_eq!(primitive_characters(8).len(), 2);
        assert_eq!(primitive_characters(5).len(), 3);
        assert_eq!(primitive_characters(12).len(), 1);
    }

    #[test]
    fn closed_under_multiplication() {
        for k in [5u64, 8, 12, 15, 16, 21] {
            let chars = characters_mod(k);
            for a in &chars {
                for b in &chars {
                    let c = a.mul(b);
                    assert!(chars.iter().any(|x| x.same_as(&c)));
                }
            }
        }
    }

    #[test]
    fn orthogonality_exact_and_float() {
        for k in [1u64, 4, 7, 8, 9, 12, 20] {
            let chars = characters_mod(k);
            let phi = euler_phi(k) as i64;
            for (i, a) in chars.iter().enumerate() {
                for (j, b) in chars.iter().enumerate() {
                    let ip = inner_product(a, b);
                    let expect = if i == j { phi } else { 0 };
                    assert_eq!(
                        ip.as_rational().unwrap(),
                        BigRational::from_integer(BigInt::from(expect))
                    );
                    let mut acc = Cx::new(0.0f64, 0.0);
                    for m in 0..k as i64 {
                        acc += a.value::<f64>(m) * b.value::<f64>(m).conj();
                    }
                    assert!((acc - Cx::new(expect as f64, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn multiplicative_and_unimodular(k in 1u64..200, m in 0i64..1000, n in 0i64..1000) {
            for chi in characters_mod(k) {
                let prod = chi.value::<f64>(m) * chi.value::<f64>(n);
                let direct = chi.value::<f64>(m * n);
                prop_assert!((prod - direct).norm() < 1e-12);
                let coprime = gcd(m as u128, k as u128) == 1;
                prop_assert_eq!(chi.index(m).is_some(), coprime);
                if coprime {
                    prop_assert!((chi.value::<f64>(m).norm() - 1.0).abs() < 1e-12);
                }
                prop_assert!(chi.period_sum_is_zero() != chi.is_principal());
            }
        }
    }
}
