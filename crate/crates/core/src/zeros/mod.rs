//! Zero counting in rectangles by tracking the argument along the boundary,
//! with Newton refinement inside cells that hold one zero.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::periodic::PeriodicFunction;
use crate::complex::Cx;
use crate::error::{Error, Result};
use crate::structure::{DecompositionResult, DirichletPolynomial};
use crate::zeta::{f_eval, PrecisionProfile};

/// Something that can be evaluated at complex `s`.
pub trait Evaluator: Sync {
    fn eval(&self, s: Cx<f64>) -> Result<Cx<f64>>;
    fn describe(&self) -> String;
}

/// `F(s, f, alpha)` through the class split.
pub struct HurwitzSeries {
    pub f: PeriodicFunction,
    pub alpha: f64,
    pub profile: PrecisionProfile,
}

impl HurwitzSeries {
    pub fn new(f: PeriodicFunction, alpha: f64) -> Self {
        HurwitzSeries { f, alpha, profile: PrecisionProfile::for_scalar::<f64>() }
    }
}

impl Evaluator for HurwitzSeries {
    fn eval(&self, s: Cx<f64>) -> Result<Cx<f64>> {
        Ok(f_eval(&s, &self.f, &self.alpha, &self.profile)?.value)
    }

    fn describe(&self) -> String {
        format!("F(s, [{}], {})", self.f.to_text(), self.alpha)
    }
}

/// `sum a(n) n^{-s}` with float coefficients.
pub struct PolynomialEval {
    pub terms: Vec<(u64, Cx<f64>)>,
}

impl PolynomialEval {
    pub fn new(p: &DirichletPolynomial) -> Self {
        PolynomialEval { terms: p.to_f64_terms() }
    }
}

impl Evaluator for PolynomialEval {
    fn eval(&self, s: Cx<f64>) -> Result<Cx<f64>> {
        Ok(self
            .terms
            .iter()
            .map(|(n, a)| a * (-s * (*n as f64).ln()).exp())
            .sum())
    }

    fn describe(&self) -> String {
        let parts: Vec<String> = self.terms.iter().map(|(n, a)| format!("({a})*{n}^-s")).collect();
        parts.join(" + ")
    }
}

/// `b^s sum_chi P_chi(s) L(s, chi)`.
pub struct DecomposedSeries {
    pub decomposition: DecompositionResult,
    pub b: u64,
    pub profile: PrecisionProfile,
}

impl DecomposedSeries {
    pub fn new(decomposition: DecompositionResult, b: u64) -> Self {
        DecomposedSeries { decomposition, b, profile: PrecisionProfile::for_scalar::<f64>() }
    }
}

impl Evaluator for DecomposedSeries {
    fn eval(&self, s: Cx<f64>) -> Result<Cx<f64>> {
        let v = self.decomposition.eval(&s, &self.profile)?.value;
        Ok(v * (s * (self.b as f64).ln()).exp())
    }

    fn describe(&self) -> String {
        let terms: Vec<String> = self
            .decomposition
            .terms
            .iter()
            .map(|t| format!("[{}] L(s, chi mod {})", t.polynomial.describe(), t.character.conductor()))
            .collect();
        format!("{}^s ({})", self.b, terms.join(" + "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rectangle {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub t_min: f64,
    pub t_max: f64,
}

impl Rectangle {
    pub fn new(sigma_min: f64, sigma_max: f64, t_min: f64, t_max: f64) -> Result<Self> {
        let r = Rectangle { sigma_min, sigma_max, t_min, t_max };
        if ![sigma_min, sigma_max, t_min, t_max].iter().all(|x| x.is_finite())
            || sigma_min >= sigma_max
            || t_min >= t_max
        {
            return Err(Error::InvalidInput(format!("degenerate rectangle {r:?}")));
        }
        Ok(r)
    }

    /// Parses `s1,s2,t1,t2`.
    pub fn parse(s: &str) -> Result<Self> {
        let v: Vec<f64> = s
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidInput(format!("cannot parse rectangle {s:?}")))?;
        if v.len() != 4 {
            return Err(Error::InvalidInput(format!("rectangle needs 4 numbers, got {}", v.len())));
        }
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn contains(&self, s: Cx<f64>, pad: f64) -> bool {
        s.re >= self.sigma_min - pad && s.re <= self.sigma_max + pad && s.im >= self.t_min - pad && s.im <= self.t_max + pad
    }

    fn corners(&self) -> [Cx<f64>; 4] {
        [
            Cx::new(self.sigma_min, self.t_min),
            Cx::new(self.sigma_max, self.t_min),
            Cx::new(self.sigma_max, self.t_max),
            Cx::new(self.sigma_min, self.t_max),
        ]
    }

    fn center(&self) -> Cx<f64> {
        Cx::new(0.5 * (self.sigma_min + self.sigma_max), 0.5 * (self.t_min + self.t_max))
    }

    fn quadrants(&self) -> [Rectangle; 4] {
        let c = self.center();
        [
            Rectangle { sigma_max: c.re, t_max: c.im, ..*self },
            Rectangle { sigma_min: c.re, t_max: c.im, ..*self },
            Rectangle { sigma_max: c.re, t_min: c.im, ..*self },
            Rectangle { sigma_min: c.re, t_min: c.im, ..*self },
        ]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RefinedZero {
    pub sigma: f64,
    pub t: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WindingResult {
    pub rectangle: Rectangle,
    pub winding: i64,
    pub min_boundary_modulus: f64,
    pub samples: usize,
    pub refined_zeros: Vec<RefinedZero>,
}

/// Subdivision depth per edge segment.
pub const MAX_LEVELS: u32 = 20;
/// `|F|` below this fraction of the boundary maximum counts as touching a zero.
pub const EPS_MIN: f64 = 1e-12;
const INITIAL_STEP: f64 = 0.25;

struct Walk {
    total: f64,
    samples: usize,
    min_abs: f64,
    min_at: Cx<f64>,
    max_abs: f64,
    unresolved: bool,
}

impl Walk {
    fn see(&mut self, s: Cx<f64>, v: Cx<f64>) {
        self.samples += 1;
        let a = v.norm();
        if a < self.min_abs {
            self.min_abs = a;
            self.min_at = s;
        }
        self.max_abs = self.max_abs.max(a);
    }
}

fn darg(a: Cx<f64>, b: Cx<f64>) -> f64 {
    (b / a).arg()
}

fn segment(ev: &dyn Evaluator, a: Cx<f64>, fa: Cx<f64>, b: Cx<f64>, fb: Cx<f64>, level: u32, w: &mut Walk) -> Result<()> {
    let m = 0.5 * (a + b);
    let fm = ev.eval(m)?;
    w.see(m, fm);
    let d1 = darg(fa, fm);
    let d2 = darg(fm, fb);
    let whole = darg(fa, fb);
    let settled = d1.abs() < PI / 2.0 && d2.abs() < PI / 2.0 && (d1 + d2 - whole).abs() < 1e-9;
    if settled || level >= MAX_LEVELS || fm.norm() == 0.0 {
        if !settled {
            w.unresolved = true;
        }
        w.total += d1 + d2;
        return Ok(());
    }
    segment(ev, a, fa, m, fm, level + 1, w)?;
    segment(ev, m, fm, b, fb, level + 1, w)
}

/// Zeros of the evaluator inside `rect`, counted by the argument principle.
pub fn winding_number(ev: &dyn Evaluator, rect: &Rectangle) -> Result<WindingResult> {
    let corners = rect.corners();
    let mut w = Walk { total: 0.0, samples: 0, min_abs: f64::INFINITY, min_at: corners[0], max_abs: 0.0, unresolved: false };
    for k in 0..4 {
        let (a, b) = (corners[k], corners[(k + 1) % 4]);
        let pieces = ((b - a).norm() / INITIAL_STEP).ceil().max(4.0) as usize;
        let mut prev = a;
        let mut fprev = ev.eval(a)?;
        w.see(a, fprev);
        for i in 1..=pieces {
            let next = a + (b - a) * (i as f64 / pieces as f64);
            let fnext = ev.eval(next)?;
            w.see(next, fnext);
            segment(ev, prev, fprev, next, fnext, 0, &mut w)?;
            prev = next;
            fprev = fnext;
        }
    }
    if w.min_abs < EPS_MIN * w.max_abs || w.unresolved {
        return Err(Error::BoundaryTooCloseToZero { sigma: w.min_at.re, t: w.min_at.im });
    }
    let turns = w.total / (2.0 * PI);
    let winding = turns.round();
    if (turns - winding).abs() > 1e-6 {
        return Err(Error::BoundaryTooCloseToZero { sigma: w.min_at.re, t: w.min_at.im });
    }
    Ok(WindingResult {
        rectangle: *rect,
        winding: winding as i64,
        min_boundary_modulus: w.min_abs,
        samples: w.samples,
        refined_zeros: Vec::new(),
    })
}

/// Newton iteration with a central-difference derivative.
fn newton(ev: &dyn Evaluator, start: Cx<f64>, cell: &Rectangle) -> Result<Option<RefinedZero>> {
    let mut s = start;
    let pad = 0.05 * (cell.sigma_max - cell.sigma_min).max(cell.t_max - cell.t_min);
    for _ in 0..60 {
        let v = ev.eval(s)?;
        if v.norm() < 1e-13 {
            break;
        }
        let h = 1e-6 * (1.0 + s.norm());
        let d = (ev.eval(s + h)? - ev.eval(s - h)?) / (2.0 * h);
        if d.norm() == 0.0 {
            return Ok(None);
        }
        let step = v / d;
        s -= step;
        if !cell.contains(s, pad) {
            return Ok(None);
        }
        if step.norm() < 1e-14 * (1.0 + s.norm()) {
            break;
        }
    }
    let r = ev.eval(s)?.norm();
    Ok((r < 1e-8 && cell.contains(s, pad)).then_some(RefinedZero { sigma: s.re, t: s.im, residual: r }))
}

/// Winding number of one cell together with its refined zeros.
pub fn scan_cell(ev: &dyn Evaluator, cell: &Rectangle) -> Result<WindingResult> {
    let mut w = winding_number(ev, cell)?;
    w.refined_zeros = refine_cell(ev, cell, w.winding, 0)?;
    Ok(w)
}

/// Isolates and refines the zeros of a cell with known winding.
fn refine_cell(ev: &dyn Evaluator, cell: &Rectangle, winding: i64, depth: u32) -> Result<Vec<RefinedZero>> {
    if winding <= 0 {
        return Ok(Vec::new());
    }
    if winding == 1 {
        if let Some(z) = newton(ev, cell.center(), cell)? {
            return Ok(vec![z]);
        }
    }
    if depth >= 12 {
        // multiple zero or a cluster: one Newton attempt from the center
        return Ok(newton(ev, cell.center(), cell)?.into_iter().collect());
    }
    let mut out = Vec::new();
    for sub in cell.quadrants() {
        let w = match winding_number(ev, &sub) {
            Ok(w) => w.winding,
            Err(Error::BoundaryTooCloseToZero { sigma, t }) => {
                // the zero sits on an inner line; take it directly
                if let Some(z) = newton(ev, Cx::new(sigma, t), cell)? {
                    out.push(z);
                }
                continue;
            }
            Err(e) => return Err(e),
        };
        out.extend(refine_cell(ev, &sub, w, depth + 1)?);
    }
    Ok(out)
}

fn dedup(mut zeros: Vec<RefinedZero>) -> Vec<RefinedZero> {
    zeros.sort_by(|a, b| a.t.total_cmp(&b.t).then(a.sigma.total_cmp(&b.sigma)));
    let mut out: Vec<RefinedZero> = Vec::new();
    for z in zeros {
        if !out.iter().any(|o| (o.sigma - z.sigma).hypot(o.t - z.t) < 1e-7) {
            out.push(z);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroSearchReport {
    pub region: Rectangle,
    /// The region actually covered after any perturbation of grid lines.
    pub covered: Rectangle,
    pub grid: (usize, usize),
    pub cells: Vec<WindingResult>,
    pub total_winding: i64,
    pub zeros: Vec<RefinedZero>,
    pub perturbations: u32,
}

/// `n + 1` lines from `lo` to `hi`; inner lines move by `shift` cells and,
/// when `widen`, the outer ones move outwards by `|shift|` cells.
fn grid_lines(lo: f64, hi: f64, n: usize, shift: f64, widen: bool) -> Vec<f64> {
    let h = (hi - lo) / n as f64;
    let pad = if widen { shift.abs() * h } else { 0.0 };
    (0..=n)
        .map(|i| match i {
            0 => lo - pad,
            i if i == n => hi + pad,
            i => lo + h * i as f64 + shift * h,
        })
        .collect()
}

/// Covers `region` by an `n_sigma x n_t` grid of cells, counts zeros per
/// cell and refines them. If a grid line passes through a zero, inner lines
/// shift and outer lines move outwards by a small fraction of a cell.
pub fn zero_search(ev: &dyn Evaluator, region: &Rectangle, n_sigma: usize, n_t: usize) -> Result<ZeroSearchReport> {
    if region.sigma_min <= 1.0 {
        return Err(Error::InvalidInput(format!("zero search needs sigma_min > 1, got {}", region.sigma_min)));
    }
    if n_sigma == 0 || n_t == 0 {
        return Err(Error::InvalidInput("grid must be at least 1x1".into()));
    }
    let shifts = [0.0, 0.0137, -0.0291, 0.0413, -0.0571];
    let mut last_err = None;
    for (attempt, &shift) in shifts.iter().enumerate() {
        let widen = attempt > 0;
        let mut xs = grid_lines(region.sigma_min, region.sigma_max, n_sigma, shift, widen);
        let ts = grid_lines(region.t_min, region.t_max, n_t, shift, widen);
        if xs[0] <= 1.0 {
            xs[0] = region.sigma_min;
        }
        let cells: Vec<Rectangle> = (0..n_t)
            .flat_map(|j| (0..n_sigma).map(move |i| (i, j)))
            .map(|(i, j)| Rectangle { sigma_min: xs[i], sigma_max: xs[i + 1], t_min: ts[j], t_max: ts[j + 1] })
            .collect();
        let results: Vec<Result<WindingResult>> = cells
            .par_iter()
            .map(|c| scan_cell(ev, c))
            .collect();
        match results.into_iter().collect::<Result<Vec<_>>>() {
            Ok(cells) => {
                let zeros = dedup(cells.iter().flat_map(|c| c.refined_zeros.clone()).collect());
                return Ok(ZeroSearchReport {
                    region: *region,
                    covered: Rectangle { sigma_min: xs[0], sigma_max: xs[n_sigma], t_min: ts[0], t_max: ts[n_t] },
                    grid: (n_sigma, n_t),
                    total_winding: cells.iter().map(|c| c.winding).sum(),
                    cells,
                    zeros,
                    perturbations: attempt as u32,
                });
            }
            Err(e @ Error::BoundaryTooCloseToZero { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::InvalidInput("grid perturbation left sigma > 1".into())))
}
