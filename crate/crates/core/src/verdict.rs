//! Whether `F(s, f, alpha)` has zeros in `sigma > 1`, with the chain of
//! evidence behind the answer.

use serde::Serialize;

use crate::alpha::AlphaParameter;
use crate::arith::periodic::PeriodicFunction;
use crate::error::{Error, Result};
use crate::structure::{detect_pl_form, lift_rational, DirichletPolynomial, PlCertificate, PlVerdict};
use crate::zeros::{zero_search, PolynomialEval, Rectangle, ZeroSearchReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Infinitely many zeros in `sigma > 1`.
    InfinitelyManyZeros,
    /// Single-term form whose polynomial factor vanishes in `sigma > 1`.
    ZerosFromPolynomial,
    /// Single-term form; no zero of the polynomial factor in the scanned region.
    NoZerosFound,
    Undetermined,
}

#[derive(Clone, Debug)]
pub struct VerdictOptions {
    /// Polynomial zeros are scanned for `|t| <= t_max`.
    pub t_max: f64,
    pub conductor_cap: Option<u64>,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        VerdictOptions { t_max: 30.0, conductor_cap: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictReport {
    pub alpha: String,
    pub f: String,
    pub verdict: Verdict,
    pub statement: String,
    pub evidence: Vec<String>,
    pub certificate: Option<PlCertificate>,
    /// `sigma` beyond which the leading term of the polynomial dominates.
    pub dominance_sigma: Option<f64>,
    pub polynomial_scan: Option<ZeroSearchReport>,
}

/// Smallest `sigma` (to 1e-12) past which `|a(n_1)| n_1^{-sigma}` exceeds the
/// sum of the other terms; `None` for a single term.
pub fn dominance_sigma(p: &DirichletPolynomial) -> Option<f64> {
    let terms: Vec<(f64, f64)> = p.to_f64_terms().iter().map(|(n, a)| (*n as f64, a.norm())).collect();
    let ((n1, a1), rest) = terms.split_first()?;
    if rest.is_empty() {
        return None;
    }
    let excess = |s: f64| rest.iter().map(|(n, a)| a * (n / n1).powf(-s)).sum::<f64>() - a1;
    let (mut lo, mut hi) = (-64.0, 1.0);
    while excess(hi) >= 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    if excess(lo) < 0.0 {
        return Some(lo);
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(hi)
}

fn scan_polynomial(p: &DirichletPolynomial, t_max: f64) -> Result<(Option<f64>, Option<ZeroSearchReport>)> {
    let Some(sb) = dominance_sigma(p) else {
        return Ok((None, None));
    };
    let lo = 1.001;
    let hi = sb + 0.1;
    if hi <= lo {
        return Ok((Some(sb), None));
    }
    let rect = Rectangle::new(lo, hi, -t_max, t_max)?;
    let n_sigma = ((hi - lo) / 0.25).ceil().max(1.0) as usize;
    let n_t = ((2.0 * t_max) / 2.5).ceil().max(1.0) as usize;
    let rep = zero_search(&PolynomialEval::new(p), &rect, n_sigma, n_t)?;
    Ok((Some(sb), Some(rep)))
}

pub fn nonvanishing_verdict(f: &PeriodicFunction, alpha: &AlphaParameter, opts: &VerdictOptions) -> Result<VerdictReport> {
    let mut report = VerdictReport {
        alpha: alpha.describe(),
        f: f.to_text(),
        verdict: Verdict::Undetermined,
        statement: String::new(),
        evidence: Vec::new(),
        certificate: None,
        dominance_sigma: None,
        polynomial_scan: None,
    };
    match alpha {
        AlphaParameter::UntypedFloat { .. } => return Err(Error::UnsupportedAlpha),
        AlphaParameter::Algebraic(a) => {
            report.verdict = Verdict::InfinitelyManyZeros;
            report.statement = "infinitely many zeros in sigma > 1".into();
            report.evidence.push(format!(
                "alpha is algebraic irrational of degree {} (minimal polynomial [{}])",
                a.degree(),
                a.minpoly_text()
            ));
            report.evidence.push("f is periodic and not identically zero".into());
            report.evidence.push(
                "a unimodular completely multiplicative twist on prime ideals of Q(alpha) makes the series vanish at some sigma in (1, 1 + delta) for every delta; zeros follow by almost periodicity".into(),
            );
            return Ok(report);
        }
        AlphaParameter::Rational(shift) => {
            let lift = lift_rational(f, *shift);
            report.evidence.push(format!(
                "F(s, f, {shift}) = {}^s sum g(m) m^-s with g of period {} supported on m = {} mod {}",
                shift.b(),
                lift.coeffs.period(),
                shift.a() % shift.b(),
                shift.b()
            ));
            let cert = detect_pl_form(&lift.coeffs, opts.conductor_cap);
            report.evidence.push(format!("single-term test: {:?} ({})", cert.verdict, cert.note));
            match cert.verdict {
                PlVerdict::NotPl => {
                    report.verdict = Verdict::InfinitelyManyZeros;
                    report.statement = "infinitely many zeros in sigma > 1".into();
                    report.evidence.push(
                        "a periodic Dirichlet series that is not P(s) L(s, chi) has infinitely many zeros in sigma > 1".into(),
                    );
                }
                PlVerdict::Unknown => {
                    report.statement = "structure undetermined within the conductor cap".into();
                }
                PlVerdict::IsPl => {
                    let chi = cert.character.as_ref().expect("certificate carries a character");
                    report.evidence.push(format!(
                        "F = {}^s P(s) L(s, chi) with chi of conductor {}, P(s) = {}",
                        shift.b(),
                        chi.conductor(),
                        cert.polynomial.describe()
                    ));
                    report.evidence.push("L(s, chi) and b^s do not vanish in sigma > 1".into());
                    let (sb, scan) = scan_polynomial(&cert.polynomial, opts.t_max)?;
                    report.dominance_sigma = sb;
                    match (&sb, &scan) {
                        (None, _) => {
                            report.verdict = Verdict::NoZerosFound;
                            report.statement = "no zeros: P is a single term".into();
                        }
                        (Some(s), None) => {
                            report.verdict = Verdict::NoZerosFound;
                            report.statement = format!("no zeros: the leading term of P dominates for sigma > {s:.6}");
                        }
                        (Some(s), Some(rep)) if rep.zeros.is_empty() => {
                            report.verdict = Verdict::NoZerosFound;
                            report.statement = "no zeros found; consistent with zero-free form".into();
                            report.evidence.push(format!(
                                "P has no zeros in [1.001, {:.4}] x [-{t}, {t}] (zeros of P lie in sigma <= {s:.6})",
                                s + 0.1,
                                t = opts.t_max
                            ));
                        }
                        (Some(_), Some(rep)) => {
                            report.verdict = Verdict::ZerosFromPolynomial;
                            report.statement = "zeros exist (from P)".into();
                            let list: Vec<String> =
                                rep.zeros.iter().map(|z| format!("{:.8}{:+.8}i", z.sigma, z.t)).collect();
                            report.evidence.push(format!("zeros of P: {}", list.join(", ")));
                        }
                    }
                    report.polynomial_scan = scan;
                }
            }
            report.certificate = Some(cert);
        }
    }
    Ok(report)
}
