//! Stage-by-stage construction of a unimodular completely multiplicative
//! twist `phi` on prime ideals for which the partial sums of
//! `sum f(n) phi(n) (n+alpha)^{-sigma}` contract against the tail.

mod bohr;
mod phi;

pub use bohr::bohr_solve;
pub use phi::{PhiAssignment, PhiCase, PhiLogEntry};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith::cache::FactorCache;
use crate::arith::periodic::PeriodicFunction;
use crate::complex::{self, Cx};
use crate::density::{choose_private, WindowSpec};
use crate::error::{Error, Result};
use crate::ideal::{AlgebraicAlpha, IdealFactorizationRecord, PrimeIdealKey};
use crate::scalar::Real;
use crate::zeta::{class_head, class_tail, PrecisionProfile};

#[derive(Clone, Debug, PartialEq)]
pub struct ConstructionProfile {
    pub name: String,
    pub theta: BigRational,
    pub density_floor: f64,
    pub contraction: f64,
    pub min_a_size: u64,
    /// `N_1 = n1_per_q * q` unless overridden.
    pub n1_per_q: u64,
    pub n1_override: Option<u64>,
    pub delta: f64,
    pub digits: u32,
}

impl Serialize for ConstructionProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ConstructionProfile", 9)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("theta", &self.theta.to_string())?;
        st.serialize_field("density_floor", &self.density_floor)?;
        st.serialize_field("contraction", &self.contraction)?;
        st.serialize_field("min_a_size", &self.min_a_size)?;
        st.serialize_field("n1_per_q", &self.n1_per_q)?;
        st.serialize_field("n1_override", &self.n1_override)?;
        st.serialize_field("delta", &self.delta)?;
        st.serialize_field("digits", &self.digits)?;
        st.end()
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl ConstructionProfile {
    /// Small windows that finish in seconds.
    pub fn desk() -> Self {
        ConstructionProfile {
            name: "desk".into(),
            theta: ratio(1, 20),
            density_floor: 0.54,
            contraction: 0.01,
            min_a_size: 5,
            n1_per_q: 4000,
            n1_override: None,
            delta: 0.5,
            digits: 50,
        }
    }

    /// `M = floor(10^-6 N)`, `N_1 = 10^7 q`.
    pub fn canonical() -> Self {
        ConstructionProfile {
            name: "canonical".into(),
            theta: ratio(1, 1_000_000),
            n1_per_q: 10_000_000,
            ..Self::desk()
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "desk" => Ok(Self::desk()),
            "canonical" => Ok(Self::canonical()),
            _ => Err(Error::InvalidInput(format!("unknown profile {name:?} (desk or canonical)"))),
        }
    }

    pub fn n1(&self, q: u64) -> u64 {
        self.n1_override.unwrap_or(self.n1_per_q * q)
    }

    fn theta_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.theta.to_f64().unwrap_or(f64::NAN)
    }

    /// `(rho/(1-rho)) (1+theta)^{-(1+delta)} > (1+c)/(1-c)` with `rho` the
    /// density floor and `c` the contraction.
    pub fn check_consistency(&self) -> Result<()> {
        let rho = self.density_floor;
        let c = self.contraction;
        if !(rho > 0.5 && rho < 1.0) || !(c > 0.0 && c < 1.0) || !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InconsistentProfile(format!(
                "need 1/2 < density_floor < 1, 0 < contraction < 1, 0 < delta < 1 (got {rho}, {c}, {})",
                self.delta
            )));
        }
        let lhs = rho / (1.0 - rho) * (1.0 + self.theta_f64()).powf(-(1.0 + self.delta));
        let rhs = (1.0 + c) / (1.0 - c);
        if lhs > rhs {
            Ok(())
        } else {
            Err(Error::InconsistentProfile(format!("{lhs:.6} <= {rhs:.6}")))
        }
    }
}

/// Where `sigma` came from.
#[derive(Clone, Debug, Serialize)]
pub struct SigmaCertificate {
    pub sigma: f64,
    /// `sigma` at working precision.
    pub sigma_text: String,
    /// `sigma - 1`, exactly as used: `sigma = 1 + sigma_gap` at working precision.
    pub sigma_gap: f64,
    /// Largest `sigma` found by bisection at which the inequality holds.
    pub sigma_crossing: f64,
    pub n1: u64,
    /// Per class `b` with `f(b) != 0`: `(b, head, tail)` without the weight.
    pub classes: Vec<(u64, f64, f64)>,
    pub head_weighted: f64,
    pub tail_weighted: f64,
}

fn nonzero_classes(f: &PeriodicFunction) -> Vec<u64> {
    (0..f.period() as u64).filter(|&b| !f.at(b as i64).is_zero()).collect()
}

/// Class-wise `head_b(N_1) < c tail_b(N_1)`; weighting by `|f(b)|` and summing
/// gives the inequality for the whole series.
fn sigma_margin<T: Real>(
    classes: &[u64],
    q: u64,
    alpha: &T,
    sigma: &T,
    n1: u64,
    c: &T,
    prof: &PrecisionProfile,
) -> Result<(bool, Vec<(T, T)>)> {
    let mut ok = true;
    let mut out = Vec::new();
    for &b in classes {
        let (h, eh) = class_head(b, q, alpha, sigma, n1, prof)?;
        let (t, et) = class_tail(b, q, alpha, sigma, n1, prof)?;
        ok &= h.clone() + eh < c.clone() * (t.clone() - et);
        out.push((h, t));
    }
    Ok((ok, out))
}

/// Picks `1 < sigma < 1 + delta` with
/// `sum_{n<=N_1} |f(n)| (n+alpha)^{-sigma} < c sum_{n>N_1} |f(n)| (n+alpha)^{-sigma}`,
/// certified at the precision of `T`.
pub fn select_sigma<T: Real>(
    f: &PeriodicFunction,
    alpha: &AlgebraicAlpha,
    profile: &ConstructionProfile,
) -> Result<(T, SigmaCertificate)> {
    let q = f.period() as u64;
    let n1 = profile.n1(q);
    let classes = nonzero_classes(f);
    let a64 = alpha.value_f64();
    let prof64 = PrecisionProfile::for_scalar::<f64>().with_tolerance(1e-8);
    let c64 = profile.contraction;
    let holds64 = |s: f64| -> bool {
        sigma_margin(&classes, q, &a64, &s, n1, &c64, &prof64).map(|r| r.0).unwrap_or(false)
    };

    let top = 1.0 + profile.delta;
    let crossing = if holds64(top) {
        top
    } else {
        let mut lo = 1.0 + profile.delta / 2.0;
        let mut tries = 0;
        while !holds64(lo) {
            lo = 1.0 + (lo - 1.0) / 2.0;
            tries += 1;
            if tries > 60 {
                return Err(Error::PrecisionExhausted("no sigma found in (1, 1 + delta)".into()));
            }
        }
        let mut hi = top;
        for _ in 0..50 {
            let mid = 0.5 * (lo + hi);
            if holds64(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };

    let prof = PrecisionProfile::for_scalar::<T>();
    let at = alpha.value::<T>();
    let c = T::from_f64(profile.contraction);
    let mut gap = 0.9 * (crossing - 1.0);
    for _ in 0..40 {
        let sigma = T::one() + T::from_f64(gap);
        let (ok, vals) = sigma_margin(&classes, q, &at, &sigma, n1, &c, &prof)?;
        if ok {
            let mut hw = 0.0;
            let mut tw = 0.0;
            let mut cls = Vec::new();
            for (&b, (h, t)) in classes.iter().zip(&vals) {
                let w = f.abs_at::<f64>(b as i64);
                hw += w * h.to_f64();
                tw += w * t.to_f64();
                cls.push((b, h.to_f64(), t.to_f64()));
            }
            let cert = SigmaCertificate {
                sigma: sigma.to_f64(),
                sigma_text: sigma.to_string(),
                sigma_gap: gap,
                sigma_crossing: crossing,
                n1,
                classes: cls,
                head_weighted: hw,
                tail_weighted: tw,
            };
            return Ok((sigma, cert));
        }
        gap *= 0.9;
    }
    Err(Error::PrecisionExhausted("sigma inequality not separable at this precision".into()))
}

/// Running data between stages.
#[derive(Clone, Debug)]
pub struct StageState<T> {
    pub j: u32,
    pub n_j: u64,
    pub sigma: T,
    /// `sum_{n <= N_j, n = b} f(n) phi(n) (n+alpha)^{-sigma}` per class.
    pub class_sums: Vec<Cx<T>>,
    /// Error bound per class sum.
    pub class_errs: Vec<T>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassStageReport {
    pub b: u64,
    pub f_b: String,
    pub a_size: u64,
    pub b_size: u64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub s4: f64,
    pub lambda: [f64; 2],
    pub target: [f64; 2],
    /// `|sum_{n <= N_{j+1}, n = b} ...|` after assignment.
    pub residual: f64,
    /// `max(0, |Lambda| - S_3)`.
    pub bound: f64,
    pub bound_ok: bool,
    /// Whether `|B(b)| <= (1 - density_floor) M/q`, the hypothesis of the ratio check.
    pub ratio_applicable: bool,
    /// `S_3 / S_2` (infinite when `B(b)` is empty).
    pub ratio: f64,
    /// `S_3 - S_2 > c (S_3 + S_2)`.
    pub ratio_ok: bool,
    /// `residual < c S_4`.
    pub class_inequality_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub j: u32,
    pub n_j: u64,
    pub m_j: u64,
    pub n_next: u64,
    pub classes: Vec<ClassStageReport>,
    /// `|sum_{n <= N_{j+1}} f(n) phi(n) (n+alpha)^{-sigma}|`.
    pub partial_sum_abs: f64,
    /// `c sum_{n > N_{j+1}} |f(n)| (n+alpha)^{-sigma}`.
    pub envelope: f64,
    pub stage_inequality: bool,
    pub assigned: usize,
    pub defaulted: usize,
    pub max_error_bound: f64,
}

fn power<T: Real>(z: &Cx<T>, u: u32) -> Cx<T> {
    let mut acc = complex::one::<T>();
    for _ in 0..u {
        acc = acc * z.clone();
    }
    acc
}

/// `phi(n)` from the stored phases; unassigned and residual primes give 1.
pub fn phi_of<T: Real>(rec: &IdealFactorizationRecord, phi: &PhiAssignment<T>) -> Cx<T> {
    rec.admissible
        .iter()
        .fold(complex::one::<T>(), |acc, (k, u)| acc * power(&phi.get(k), *u))
}

fn weight<T: Real>(n: u64, alpha: &T, sigma: &T) -> T {
    (-(sigma.clone()) * (T::from_u64(n) + alpha.clone()).ln()).exp()
}

fn tolerance<T: Real>(digits: u32) -> T {
    T::from_f64(10f64.powi(-(digits as i32) / 2))
}

pub fn initial_state<T: Real>(
    f: &PeriodicFunction,
    alpha: &AlgebraicAlpha,
    sigma: &T,
    n1: u64,
) -> Result<StageState<T>> {
    let q = f.period() as u64;
    let prof = PrecisionProfile::for_scalar::<T>();
    let at = alpha.value::<T>();
    let mut sums = Vec::new();
    let mut errs = Vec::new();
    for b in 0..q {
        let fb = f.eval::<T>(b as i64);
        if f.at(b as i64).is_zero() {
            sums.push(Cx::new(T::zero(), T::zero()));
            errs.push(T::zero());
            continue;
        }
        let (h, e) = class_head(b, q, &at, sigma, n1, &prof)?;
        errs.push(e * complex::abs(&fb));
        sums.push(complex::scale(&fb, &h));
    }
    Ok(StageState { j: 1, n_j: n1, sigma: sigma.clone(), class_sums: sums, class_errs: errs })
}

/// One induction step `N_j -> N_{j+1} = N_j + M_j`.
pub fn stage_advance<T: Real>(
    state: &StageState<T>,
    alpha: &AlgebraicAlpha,
    f: &PeriodicFunction,
    profile: &ConstructionProfile,
    phi: &mut PhiAssignment<T>,
    cache: &FactorCache,
) -> Result<(StageState<T>, StageReport)> {
    let q = f.period() as u64;
    let window = WindowSpec::new(state.n_j, profile.theta.clone(), q, 0)?;
    let m_j = window.m();
    let end = window.end();
    let at = alpha.value::<T>();
    let sigma = &state.sigma;
    let c = T::from_f64(profile.contraction);
    let tol = tolerance::<T>(profile.digits);
    let prof = PrecisionProfile::for_scalar::<T>();

    let recs: Vec<IdealFactorizationRecord> = (state.n_j + 1..=end)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&n| alpha.ideal_factorize_cached(n, cache))
        .collect::<Result<_>>()?;

    // partition per class; classes with f(b) = 0 keep every prime at 1
    let mut a_sets: Vec<Vec<(usize, PrimeIdealKey)>> = vec![Vec::new(); q as usize];
    let mut b_sets: Vec<Vec<usize>> = vec![Vec::new(); q as usize];
    for (i, rec) in recs.iter().enumerate() {
        let b = (rec.n % q) as usize;
        match choose_private(rec, end) {
            Some(k) if !f.at(b as i64).is_zero() => a_sets[b].push((i, k)),
            _ => b_sets[b].push(i),
        }
    }
    for b in 0..q as usize {
        if f.at(b as i64).is_zero() {
            continue;
        }
        let size = a_sets[b].len() as u64;
        if size < profile.min_a_size {
            return Err(Error::ThinClass { b: b as u64, size: size as usize, required: profile.min_a_size as usize });
        }
    }

    // case 3: everything not chosen as a private ideal is fixed to 1
    let chosen: std::collections::BTreeSet<PrimeIdealKey> =
        a_sets.iter().flat_map(|v| v.iter().map(|(_, k)| *k)).collect();
    let mut defaulted = 0;
    for rec in &recs {
        for (k, _) in &rec.admissible {
            if !chosen.contains(k) && phi.fix_default(*k, state.j) {
                defaulted += 1;
            }
        }
    }

    let mut new_sums = state.class_sums.clone();
    let mut new_errs = state.class_errs.clone();
    let mut classes = Vec::new();
    let mut assigned = 0;
    let mut total = Cx::new(T::zero(), T::zero());
    let mut envelope = T::zero();
    let mut total_err = T::zero();
    let mut max_err = T::zero();
    for b in 0..q {
        let bi = b as usize;
        let fb_exact = f.at(b as i64);
        let (s4_raw, e4) = class_tail(b, q, &at, sigma, end, &prof)?;
        if fb_exact.is_zero() {
            continue;
        }
        let fb = fb_exact.to_complex::<T>();
        let fb_abs = fb_exact.abs::<T>();
        let s4 = fb_abs.clone() * s4_raw;
        let e4 = fb_abs.clone() * e4;

        let mut b_sum = Cx::new(T::zero(), T::zero());
        let mut s2 = T::zero();
        for &i in &b_sets[bi] {
            let w = weight(recs[i].n, &at, sigma);
            b_sum = b_sum + complex::scale(&phi_of(&recs[i], phi), &w);
            s2 += w;
        }
        let s2 = s2 * fb_abs.clone();
        let s1 = complex::abs(&state.class_sums[bi]);
        let lambda = state.class_sums[bi].clone() + fb.clone() * b_sum;
        let lambda_abs = complex::abs(&lambda);

        let radii: Vec<T> = a_sets[bi].iter().map(|(i, _)| weight(recs[*i].n, &at, sigma)).collect();
        let s3 = radii.iter().fold(T::zero(), |a, r| a + r.clone()) * fb_abs.clone();
        let target = if lambda_abs <= s3 {
            -lambda.clone()
        } else {
            complex::scale(&lambda, &(-(s3.clone()) / lambda_abs.clone()))
        };
        // sum_A r_n w_n = target / f(b)
        let phases = bohr_solve(&radii, &(target.clone() / fb.clone()))?;
        for ((i, key), theta) in a_sets[bi].iter().zip(&phases) {
            let rec = &recs[*i];
            let u = rec.admissible.iter().find(|(k, _)| k == key).map(|x| x.1).expect("key divides n");
            let c_n = rec
                .admissible
                .iter()
                .filter(|(k, _)| k != key)
                .fold(complex::one::<T>(), |acc, (k, e)| acc * power(&phi.get(k), *e));
            let w = complex::cis(theta);
            let ang = complex::arg(&(w * c_n.conj())) / T::from_u64(u as u64);
            phi.assign(*key, complex::cis(&ang), state.j)?;
            assigned += 1;
        }
        let mut a_sum = Cx::new(T::zero(), T::zero());
        for (i, _) in &a_sets[bi] {
            let w = weight(recs[*i].n, &at, sigma);
            a_sum = a_sum + complex::scale(&phi_of(&recs[*i], phi), &w);
        }
        let new_sum = lambda.clone() + fb.clone() * a_sum;
        let residual = complex::abs(&new_sum);
        let count = (a_sets[bi].len() + b_sets[bi].len()) as u64;
        let err = state.class_errs[bi].clone()
            + T::epsilon() * T::from_u64(64 * (count + 4)) * (s1.clone() + s2.clone() + s3.clone() + T::one());
        if err > tol {
            return Err(Error::PrecisionExhausted(format!("class {b} error bound {:e}", err.to_f64())));
        }
        let bound = (lambda_abs.clone() - s3.clone()).max_of(T::zero());
        let bound_ok = residual <= bound.clone() + tol.clone();
        let b_size = b_sets[bi].len() as u64;
        let ratio_applicable = (b_size as f64) <= (1.0 - profile.density_floor) * m_j as f64 / q as f64;
        let ratio_ok = s3.clone() - s2.clone() > c.clone() * (s3.clone() + s2.clone());
        let ratio = if s2.is_zero() { f64::INFINITY } else { (s3.clone() / s2.clone()).to_f64() };
        let class_ok = residual.clone() + err.clone() < c.clone() * (s4.clone() - e4.clone());
        total = total + new_sum.clone();
        envelope += s4.clone();
        total_err += err.clone() + e4;
        max_err = max_err.max_of(err.clone());
        classes.push(ClassStageReport {
            b,
            f_b: fb_exact.to_string(),
            a_size: a_sets[bi].len() as u64,
            b_size,
            s1: s1.to_f64(),
            s2: s2.to_f64(),
            s3: s3.to_f64(),
            s4: s4.to_f64(),
            lambda: [lambda.re.to_f64(), lambda.im.to_f64()],
            target: [target.re.to_f64(), target.im.to_f64()],
            residual: residual.to_f64(),
            bound: bound.to_f64(),
            bound_ok,
            ratio_applicable,
            ratio,
            ratio_ok,
            class_inequality_ok: class_ok,
        });
        new_sums[bi] = new_sum;
        new_errs[bi] = err;
    }
    let partial = complex::abs(&total);
    let env = c * envelope;
    let stage_inequality = partial.clone() + total_err.clone() < env.clone() - total_err;
    let report = StageReport {
        j: state.j,
        n_j: state.n_j,
        m_j,
        n_next: end,
        classes,
        partial_sum_abs: partial.to_f64(),
        envelope: env.to_f64(),
        stage_inequality,
        assigned,
        defaulted,
        max_error_bound: max_err.to_f64(),
    };
    let next = StageState {
        j: state.j + 1,
        n_j: end,
        sigma: sigma.clone(),
        class_sums: new_sums,
        class_errs: new_errs,
    };
    Ok((next, report))
}

/// From-scratch class sums up to `n_end` using only the phase log.
pub fn recompute_class_sums<T: Real>(
    f: &PeriodicFunction,
    alpha: &AlgebraicAlpha,
    sigma: &T,
    n1: u64,
    n_end: u64,
    phi: &PhiAssignment<T>,
    cache: &FactorCache,
) -> Result<Vec<Cx<T>>> {
    let q = f.period() as u64;
    let mut sums = initial_state(f, alpha, sigma, n1)?.class_sums;
    let at = alpha.value::<T>();
    let recs: Vec<IdealFactorizationRecord> = (n1 + 1..=n_end)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&n| alpha.ideal_factorize_cached(n, cache))
        .collect::<Result<_>>()?;
    for rec in &recs {
        let b = (rec.n % q) as usize;
        if f.at(b as i64).is_zero() {
            continue;
        }
        let term = f.eval::<T>(b as i64) * complex::scale(&phi_of(rec, phi), &weight(rec.n, &at, sigma));
        sums[b] = sums[b].clone() + term;
    }
    Ok(sums)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstructionReport {
    pub profile: ConstructionProfile,
    pub q: u64,
    pub sigma: SigmaCertificate,
    pub stages_requested: u32,
    pub stages: Vec<StageReport>,
    /// Why the run stopped early, if it did.
    pub halted: Option<String>,
    pub all_stage_inequalities: bool,
    /// `|sum_{n <= N_J} f(n) phi(n) (n+alpha)^{-sigma}|` and the envelope
    /// `c sum_{n > N_J} |f(n)| (n+alpha)^{-sigma}` after the last stage.
    pub final_partial_sum_abs: f64,
    pub final_envelope: f64,
    /// Largest difference between the incremental and recomputed class sums.
    pub recomputation_gap: f64,
    pub recomputation_ok: bool,
    pub phi_assigned: usize,
}

/// Selects `sigma` and runs `stages` induction steps. A stage that cannot
/// run (a thin class, say) stops the run and is reported in `halted`.
pub fn run_construction<T: Real>(
    f: &PeriodicFunction,
    alpha: &AlgebraicAlpha,
    profile: &ConstructionProfile,
    stages: u32,
    cache: &FactorCache,
) -> Result<(ConstructionReport, PhiAssignment<T>)> {
    if stages == 0 {
        return Err(Error::InvalidInput("at least one stage is required".into()));
    }
    if T::working_digits() < profile.digits {
        return Err(Error::InvalidInput(format!(
            "profile asks for {} digits, scalar carries {}",
            profile.digits,
            T::working_digits()
        )));
    }
    profile.check_consistency()?;
    let q = f.period() as u64;
    if alpha.q_context() % q != 0 {
        return Err(Error::InvalidInput(format!(
            "alpha was validated for q = {}, f has period {q}",
            alpha.q_context()
        )));
    }
    let (sigma, cert) = select_sigma::<T>(f, alpha, profile)?;
    let n1 = profile.n1(q);
    let mut state = initial_state(f, alpha, &sigma, n1)?;
    let mut phi = PhiAssignment::new();
    let mut reports = Vec::new();
    let mut halted = None;
    for _ in 0..stages {
        match stage_advance(&state, alpha, f, profile, &mut phi, cache) {
            Ok((next, rep)) => {
                state = next;
                reports.push(rep);
            }
            Err(e @ (Error::ThinClass { .. } | Error::EmptyWindow { .. } | Error::Unreachable { .. })) => {
                halted = Some(format!("stage {}: {e}", state.j));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let recomputed = recompute_class_sums(f, alpha, &sigma, n1, state.n_j, &phi, cache)?;
    let gap = recomputed
        .iter()
        .zip(&state.class_sums)
        .map(|(a, b)| complex::abs(&(a.clone() - b.clone())))
        .fold(T::zero(), |m, x| m.max_of(x));
    let tol = tolerance::<T>(profile.digits);
    let total = state.class_sums.iter().fold(Cx::new(T::zero(), T::zero()), |a, x| a + x.clone());
    let prof = PrecisionProfile::for_scalar::<T>();
    let at = alpha.value::<T>();
    let mut env = T::zero();
    for b in 0..q {
        if f.at(b as i64).is_zero() {
            continue;
        }
        env += f.abs_at::<T>(b as i64) * class_tail(b, q, &at, &sigma, state.n_j, &prof)?.0;
    }
    let report = ConstructionReport {
        profile: profile.clone(),
        q,
        sigma: cert,
        stages_requested: stages,
        all_stage_inequalities: halted.is_none() && reports.iter().all(|r| r.stage_inequality),
        stages: reports,
        halted,
        final_partial_sum_abs: complex::abs(&total).to_f64(),
        final_envelope: (T::from_f64(profile.contraction) * env).to_f64(),
        recomputation_gap: gap.to_f64(),
        recomputation_ok: gap <= tol,
        phi_assigned: phi.len(),
    };
    Ok((report, phi))
}
