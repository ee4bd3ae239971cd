//! Rational shifts as periodic Dirichlet series, their splitting into
//! Dirichlet L-functions, and the test for the single-term form
//! `P(s) L(s, chi)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::alpha::RationalShift;
use crate::arith::character::{characters_mod, primitive_characters, DirichletCharacter};
use crate::arith::cyclotomic::Cyclotomic;
use crate::arith::periodic::{CRational, PeriodicFunction};
use crate::arith::prime::{divisors, euler_phi, factorize, gcd, lcm, moebius};
use crate::complex::{self, Cx};
use crate::error::Result;
use crate::scalar::Real;
use crate::zeta::{hurwitz_zeta, EvalResult, PrecisionProfile};

/// `g(m)` with `F(s, f, a/b) = b^s sum_{m>=1} g(m) m^{-s}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiftedSeries {
    pub coeffs: PeriodicFunction,
    pub shift: RationalShift,
}

impl LiftedSeries {
    /// The class `a mod b` carrying the support.
    pub fn support_class(&self) -> (u64, u64) {
        (self.shift.a() % self.shift.b(), self.shift.b())
    }

    /// `b^s sum g(m) m^{-s}` summed directly over the first `terms` values of m.
    pub fn eval_direct<T: Real>(&self, s: &Cx<T>, terms: u64) -> Cx<T> {
        let mut acc = Cx::new(T::zero(), T::zero());
        for m in 1..=terms {
            let g = self.coeffs.at(m as i64);
            if g.is_zero() {
                continue;
            }
            acc = acc + g.to_complex::<T>() * complex::real_pow_neg(&T::from_u64(m), s);
        }
        complex::real_pow(&T::from_u64(self.shift.b()), s) * acc
    }
}

pub fn lift_rational(f: &PeriodicFunction, shift: RationalShift) -> LiftedSeries {
    let (a, b) = (shift.a(), shift.b());
    let q = f.period() as u64;
    let period = b * q;
    let values = (0..period)
        .map(|m| {
            // m = b n + a
            let m_rep = if m == 0 { period } else { m };
            if m_rep % b != a % b {
                CRational::zero()
            } else {
                let n = (m_rep + period - a) / b;
                f.at(n as i64).clone()
            }
        })
        .collect();
    LiftedSeries {
        coeffs: PeriodicFunction::new(values).expect("lift of a nonzero f is nonzero"),
        shift,
    }
}

/// Exponent of `(Z/k)^*`.
fn carmichael(k: u64) -> u64 {
    factorize(k as u128).factors.iter().fold(1, |acc, &(p, e)| {
        let (p, e) = (p as u64, e);
        let l = if p == 2 {
            match e {
                1 => 1,
                2 => 2,
                _ => 1 << (e - 2),
            }
        } else {
            p.pow(e - 1) * (p - 1)
        };
        lcm(acc, l)
    })
}

/// Common cyclotomic order for the coefficients of period `p`.
fn field_order(p: u64) -> u64 {
    lcm(4, carmichael(p))
}

fn cyclo_text(c: &Cyclotomic) -> String {
    if let Some((re, im)) = c.as_gaussian() {
        return CRational::new(re, im).to_string();
    }
    let n = c.order();
    let parts: Vec<String> = c
        .reduced()
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(j, x)| {
            let x = CRational::new(x.clone(), BigRational::zero());
            if j == 0 {
                x.to_string()
            } else {
                format!("({x})*z^{j}")
            }
        })
        .collect();
    format!("{} with z = exp(2 pi i/{n})", parts.join(" + "))
}

/// A coefficient `a(n)` of a Dirichlet polynomial.
#[derive(Clone, Debug)]
pub struct PolyCoeff {
    pub n: u64,
    pub value: Cyclotomic,
}

impl Serialize for PolyCoeff {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let z = self.value.to_complex::<f64>();
        let mut st = s.serialize_struct("PolyCoeff", 4)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("exact", &cyclo_text(&self.value))?;
        st.serialize_field("re", &z.re)?;
        st.serialize_field("im", &z.im)?;
        st.end()
    }
}

/// `P(s) = sum_n a(n) n^{-s}` with exact coefficients.
#[derive(Clone, Debug, Default, Serialize)]
pub struct DirichletPolynomial {
    pub coeffs: Vec<PolyCoeff>,
}

impl DirichletPolynomial {
    fn from_map(map: BTreeMap<u64, Cyclotomic>) -> Self {
        DirichletPolynomial {
            coeffs: map
                .into_iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(n, value)| PolyCoeff { n, value })
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support(&self) -> Vec<u64> {
        self.coeffs.iter().map(|c| c.n).collect()
    }

    pub fn support_lcm(&self) -> u64 {
        self.coeffs.iter().fold(1, |a, c| lcm(a, c.n))
    }

    pub fn eval<T: Real>(&self, s: &Cx<T>) -> Cx<T> {
        self.coeffs.iter().fold(Cx::new(T::zero(), T::zero()), |acc, c| {
            acc + c.value.to_complex::<T>() * complex::real_pow_neg(&T::from_u64(c.n), s)
        })
    }

    /// Coefficients as floats, for fast evaluation.
    pub fn to_f64_terms(&self) -> Vec<(u64, Cx<f64>)> {
        self.coeffs.iter().map(|c| (c.n, c.value.to_complex::<f64>())).collect()
    }

    pub fn describe(&self) -> String {
        self.coeffs
            .iter()
            .map(|c| format!("({})*{}^-s", cyclo_text(&c.value), c.n))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `L(s, chi) = k^{-s} sum_{a=1}^{k} chi(a) zeta(s, a/k)`.
pub fn dirichlet_l<T: Real>(s: &Cx<T>, chi: &DirichletCharacter, prof: &PrecisionProfile) -> Result<EvalResult<T>> {
    let k = chi.modulus();
    let kt = T::from_u64(k);
    let mut acc = Cx::new(T::zero(), T::zero());
    let mut err = T::zero();
    let mut pole = false;
    for a in 1..=k {
        if chi.index(a as i64).is_none() {
            continue;
        }
        let r = hurwitz_zeta(s, &(T::from_u64(a) / kt.clone()), prof)?;
        acc = acc + chi.value::<T>(a as i64) * r.value;
        err += r.abs_error_bound;
        pole |= r.pole_flag && chi.is_principal();
    }
    let ks = complex::real_pow_neg(&kt, s);
    let scale = complex::abs(&ks);
    Ok(EvalResult { value: ks * acc, abs_error_bound: err * scale, pole_flag: pole })
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionTerm {
    pub character: DirichletCharacter,
    pub polynomial: DirichletPolynomial,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionResult {
    pub period: u64,
    pub terms: Vec<DecompositionTerm>,
    /// Range `1..=verification_period` on which the coefficients were
    /// reproduced exactly.
    pub verification_period: u64,
    pub verified: bool,
}

/// Largest range checked exactly.
pub const VERIFY_LIMIT: u64 = 2_000_000;

fn exact_coeffs(g: &PeriodicFunction, order: u64) -> Vec<Cyclotomic> {
    g.values().iter().map(|v| v.to_cyclotomic(order)).collect()
}

/// `sum_{n | m} a(n) chi(m/n)` over the terms.
fn reconvolve(terms: &[(&DirichletCharacter, &DirichletPolynomial)], m: u64, order: u64) -> Cyclotomic {
    let mut acc = Cyclotomic::zero(order);
    for (chi, poly) in terms {
        for c in &poly.coeffs {
            if m % c.n == 0 {
                let v = chi.index((m / c.n) as i64);
                if let Some(e) = v {
                    if c.value.order() == order && order % chi.order() == 0 {
                        acc.add_assign(&c.value.mul_root((e * (order / chi.order())) as i64));
                    } else {
                        acc = acc.add(&c.value.mul(&Cyclotomic::root(chi.order(), e as i64)));
                    }
                }
            }
        }
    }
    acc
}

fn check_range(
    b: &[Cyclotomic],
    terms: &[(&DirichletCharacter, &DirichletPolynomial)],
    upto: u64,
    order: u64,
) -> bool {
    let p = b.len() as u64;
    (1..=upto)
        .into_par_iter()
        .all(|m| reconvolve(terms, m, order).eq_exact(&b[(m % p) as usize]))
}

/// Splits `sum_{m>=1} g(m) m^{-s}` (period `P`) as `sum_chi P_chi(s) L(s, chi)`
/// over primitive characters, grouping `m` by `d = gcd(m, P)`.
pub fn decompose(g: &PeriodicFunction) -> DecompositionResult {
    let p = g.period() as u64;
    let order = field_order(p);
    let b = exact_coeffs(g, order);
    let mut terms: Vec<(DirichletCharacter, BTreeMap<u64, Cyclotomic>)> = Vec::new();

    for d in divisors(p) {
        let k = p / d;
        let units: Vec<u64> = (1..=k).filter(|&u| gcd(u as u128, k as u128) == 1).collect();
        if units.iter().all(|&u| b[((d * u) % p) as usize].is_zero()) {
            continue;
        }
        let inv_phi = BigRational::new(BigInt::one(), BigInt::from(euler_phi(k)));
        for psi in characters_mod(k) {
            let mut c = Cyclotomic::zero(order);
            for &u in &units {
                let conj = psi.exact(u as i64, order).conj();
                c.add_assign(&b[((d * u) % p) as usize].mul(&conj));
            }
            let c = c.scale(&inv_phi);
            if c.is_zero() {
                continue;
            }
            let chi = psi.primitive_inducing();
            // L(s, psi) = L(s, chi) prod_{p | k, p not | cond} (1 - chi(p) p^{-s})
            let extra: Vec<u64> = factorize(k as u128)
                .factors
                .iter()
                .map(|&(q, _)| q as u64)
                .filter(|q| chi.conductor() % q != 0)
                .collect();
            let slot = match terms.iter().position(|(x, _)| x.same_as(&chi)) {
                Some(i) => i,
                None => {
                    terms.push((chi.clone(), BTreeMap::new()));
                    terms.len() - 1
                }
            };
            for mask in 0u32..(1 << extra.len()) {
                let mut n = d;
                let mut coeff = c.clone();
                for (j, &q) in extra.iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        n *= q;
                        coeff = chi.exact(q as i64, order).mul(&coeff).scale(&-BigRational::one());
                    }
                }
                let e = terms[slot].1.entry(n).or_insert_with(|| Cyclotomic::zero(order));
                e.add_assign(&coeff);
            }
        }
    }

    let mut terms: Vec<DecompositionTerm> = terms
        .into_iter()
        .map(|(character, map)| DecompositionTerm { character, polynomial: DirichletPolynomial::from_map(map) })
        .filter(|t| !t.polynomial.is_zero())
        .collect();
    terms.sort_by_key(|t| t.character.conductor());

    let vp = terms
        .iter()
        .fold(p, |acc, t| lcm(acc, t.character.conductor() * t.polynomial.support_lcm()));
    let verified = vp <= VERIFY_LIMIT && {
        let refs: Vec<_> = terms.iter().map(|t| (&t.character, &t.polynomial)).collect();
        check_range(&b, &refs, vp, order)
    };
    DecompositionResult { period: p, terms, verification_period: vp, verified }
}

impl DecompositionResult {
    /// `sum_chi P_chi(s) L(s, chi)`.
    pub fn eval<T: Real>(&self, s: &Cx<T>, prof: &PrecisionProfile) -> Result<EvalResult<T>> {
        let mut acc = Cx::new(T::zero(), T::zero());
        let mut err = T::zero();
        let mut pole = false;
        for t in &self.terms {
            let l = dirichlet_l(s, &t.character, prof)?;
            let pv = t.polynomial.eval(s);
            err += complex::abs(&pv) * l.abs_error_bound;
            pole |= l.pole_flag;
            acc = acc + pv * l.value;
        }
        Ok(EvalResult { value: acc, abs_error_bound: err, pole_flag: pole })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlVerdict {
    IsPl,
    NotPl,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofKind {
    ResidueObstruction,
    DeconvolutionCertificate,
    SearchExhausted,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlCertificate {
    pub verdict: PlVerdict,
    pub proof_kind: Option<ProofKind>,
    pub polynomial: DirichletPolynomial,
    pub character: Option<DirichletCharacter>,
    /// `(h, r)` when the support lies in the class `h mod r`.
    pub residue_class: Option<(u64, u64)>,
    pub verification_period: Option<u64>,
    pub conductor_cap: u64,
    pub note: String,
}

impl PlCertificate {
    fn new(verdict: PlVerdict, proof_kind: Option<ProofKind>, cap: u64, note: String) -> Self {
        PlCertificate {
            verdict,
            proof_kind,
            polynomial: DirichletPolynomial::default(),
            character: None,
            residue_class: None,
            verification_period: None,
            conductor_cap: cap,
            note,
        }
    }
}

/// Support of `g` inside a class `h mod r` with `r | P`, `r > 2`, `gcd(h, r) = 1`.
pub fn residue_obstruction(g: &PeriodicFunction) -> Option<(u64, u64)> {
    let p = g.period() as u64;
    let support: Vec<u64> = (1..=p).filter(|&m| !g.at(m as i64).is_zero()).collect();
    let first = *support.first()?;
    divisors(p).into_iter().filter(|&r| r > 2).find_map(|r| {
        let h = first % r;
        (gcd(h as u128, r as u128) == 1 && support.iter().all(|&m| m % r == h)).then_some((h, r))
    })
}

enum Attempt {
    Diverges,
    TooLong,
    Found(DirichletPolynomial, u64),
}

fn try_character(
    chi: &DirichletCharacter,
    g: &PeriodicFunction,
    b_exact: &[Cyclotomic],
    mu: &[i8],
    order: u64,
) -> Attempt {
    let p = g.period() as u64;
    let k = chi.modulus();
    let x = 4 * k * p * p;
    // floating filter first
    let bf: Vec<Cx<f64>> = g.values().iter().map(|v| v.to_complex::<f64>()).collect();
    let scale = bf.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    let thresh = 1e-9 * scale;
    let mut a = vec![Cx::new(0.0, 0.0); x as usize + 1];
    for d in 1..=x {
        if mu[d as usize] == 0 {
            continue;
        }
        if chi.index(d as i64).is_none() {
            continue;
        }
        let w = chi.value::<f64>(d as i64) * (mu[d as usize] as f64);
        let mut m = d;
        let mut j = 1u64;
        while m <= x {
            a[m as usize] += w * bf[(j % p) as usize];
            m += d;
            j += 1;
        }
    }
    if a[(x / 2 + 1) as usize..].iter().any(|z| z.norm() > thresh) {
        return Attempt::Diverges;
    }
    let mut map = BTreeMap::new();
    for n in 1..=x / 2 {
        if a[n as usize].norm() <= thresh {
            continue;
        }
        let mut c = Cyclotomic::zero(order);
        for d in divisors(n) {
            let m = mu[d as usize];
            if m == 0 || chi.index(d as i64).is_none() {
                continue;
            }
            let t = chi.exact(d as i64, order).mul(&b_exact[((n / d) % p) as usize]);
            c.add_assign(&if m > 0 { t } else { t.scale(&-BigRational::one()) });
        }
        map.insert(n, c);
    }
    let poly = DirichletPolynomial::from_map(map);
    if poly.is_zero() {
        return Attempt::Diverges;
    }
    let vp = lcm(p, k * poly.support_lcm());
    if vp > VERIFY_LIMIT {
        return Attempt::TooLong;
    }
    if check_range(b_exact, &[(chi, &poly)], vp, order) {
        Attempt::Found(poly, vp)
    } else {
        Attempt::Diverges
    }
}

fn moebius_table(x: u64) -> Vec<i8> {
    let n = x as usize;
    let mut mu = vec![1i8; n + 1];
    let mut composite = vec![false; n + 1];
    mu[0] = 0;
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        for m in (p..=n).step_by(p) {
            if m > p {
                composite[m] = true;
            }
            mu[m] = -mu[m];
        }
        let pp = p.saturating_mul(p);
        if pp <= n {
            for m in (pp..=n).step_by(pp) {
                mu[m] = 0;
            }
        }
    }
    debug_assert!(n < 30 || (1..30).all(|k| mu[k] as i32 == moebius(k as u64)));
    mu
}

/// Decides whether `sum_{m>=1} g(m) m^{-s}` equals `P(s) L(s, chi)` for a
/// Dirichlet polynomial `P` and primitive `chi` of conductor at most `cap`
/// (default: the period).
pub fn detect_pl_form(g: &PeriodicFunction, cap: Option<u64>) -> PlCertificate {
    let p = g.period() as u64;
    let cap = cap.unwrap_or(p).max(1);
    if let Some((h, r)) = residue_obstruction(g) {
        let mut c = PlCertificate::new(
            PlVerdict::NotPl,
            Some(ProofKind::ResidueObstruction),
            cap,
            format!("support lies in the class {h} mod {r} with r > 2"),
        );
        c.residue_class = Some((h, r));
        return c;
    }
    let order = field_order(p);
    let chars: Vec<DirichletCharacter> = (1..=cap).flat_map(primitive_characters).collect();
    let order = chars.iter().fold(order, |o, c| lcm(o, c.order()));
    let b_exact = exact_coeffs(g, order);
    let mu = moebius_table(4 * cap * p * p);
    let attempts: Vec<Attempt> = chars
        .par_iter()
        .map(|chi| try_character(chi, g, &b_exact, &mu, order))
        .collect();
    let mut too_long = false;
    for (chi, att) in chars.iter().zip(attempts) {
        match att {
            Attempt::Found(poly, vp) => {
                let mut c = PlCertificate::new(
                    PlVerdict::IsPl,
                    Some(ProofKind::DeconvolutionCertificate),
                    cap,
                    format!("reconvolution reproduces the coefficients on 1..={vp}"),
                );
                c.polynomial = poly;
                c.character = Some(chi.clone());
                c.verification_period = Some(vp);
                return c;
            }
            Attempt::TooLong => too_long = true,
            Attempt::Diverges => {}
        }
    }
    if too_long {
        PlCertificate::new(PlVerdict::Unknown, None, cap, "verification period too long".into())
    } else if cap >= p {
        PlCertificate::new(
            PlVerdict::NotPl,
            Some(ProofKind::SearchExhausted),
            cap,
            format!("deconvolution diverges for every primitive character of conductor <= {cap}"),
        )
    } else {
        PlCertificate::new(
            PlVerdict::Unknown,
            None,
            cap,
            format!("no single-term form with conductor <= {cap}; cap below the period {p}"),
        )
    }
}
