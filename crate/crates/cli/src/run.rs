use hurwitz_core::arith::periodic::parse_rational;
use hurwitz_core::density::{verify_private, window_entry, WindowEntry};
use hurwitz_core::zeros::{DecomposedSeries, HurwitzSeries};
use hurwitz_core::{
    decompose, density_sweep, detect_pl_form, f_eval, lift_rational, nonvanishing_verdict, run_construction,
    scan_cell, zero_search, AlgebraicAlpha, AlphaParameter, ConstructionProfile, Cx, Evaluator, FactorCache,
    IdealFactorizationRecord, Mp100, Mp50, PeriodicFunction, PrecisionProfile, RationalShift, Real, Rectangle,
    VerdictOptions, WindowSpec,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;
use crate::output::CsvTable;
use crate::CliError;

pub struct RunOutput {
    pub result: Value,
    pub csv: Option<CsvTable>,
    /// Set when the run completed but reports a domain failure (exit 2).
    pub failure: Option<String>,
}

impl RunOutput {
    fn plain(result: Value) -> Self {
        RunOutput { result, csv: None, failure: None }
    }
}

/// Shortest round-trip text, with an exponent for very large or small values.
fn num(x: f64) -> String {
    serde_json::to_string(&x).expect("finite or null")
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_minpoly(text: &str) -> Result<Vec<i64>, CliError> {
    text.split(',')
        .map(|c| c.trim().parse::<i64>().map_err(|_| usage(format!("--minpoly: bad coefficient {c:?}"))))
        .collect()
}

fn parse_interval(text: &str) -> Result<(String, String), CliError> {
    let (l, u) = text.split_once(',').ok_or_else(|| usage("--interval: expected `l,u`"))?;
    Ok((l.trim().to_string(), u.trim().to_string()))
}

pub fn algebraic(minpoly: &str, interval: &str, q: u64) -> Result<AlgebraicAlpha, CliError> {
    let (l, u) = parse_interval(interval)?;
    Ok(AlgebraicAlpha::new(&parse_minpoly(minpoly)?, &l, &u, q)?)
}

fn series(a: &SeriesArgs) -> Result<PeriodicFunction, CliError> {
    Ok(PeriodicFunction::parse(&a.f, a.q as usize)?)
}

fn alpha_param(a: &AlphaArgs, q: u64) -> Result<AlphaParameter, CliError> {
    match (&a.alpha, &a.minpoly, &a.interval) {
        (Some(s), None, None) => Ok(AlphaParameter::parse(s)?),
        (None, Some(m), Some(i)) => Ok(AlphaParameter::Algebraic(algebraic(m, i, q)?)),
        (None, Some(_), None) => Err(usage("--minpoly needs --interval")),
        (None, None, Some(_)) => Err(usage("--interval needs --minpoly")),
        (None, None, None) => Err(usage("give --alpha, or --minpoly with --interval")),
        (Some(_), _, _) => Err(usage("--alpha conflicts with --minpoly/--interval")),
    }
}

pub fn open_cache(path: Option<&std::path::Path>) -> Result<FactorCache, CliError> {
    Ok(match path {
        Some(p) => FactorCache::open(p)?,
        None => FactorCache::in_memory(),
    })
}

pub fn run(cmd: &Command, cache: &FactorCache) -> Result<RunOutput, CliError> {
    match cmd {
        Command::Eval(a) => eval(a),
        Command::Decompose(a) => decompose_cmd(a),
        Command::Classify(a) => classify(a),
        Command::FactorIdeals(a) => factor_ideals(a, cache),
        Command::Density(a) => density(a, cache),
        Command::ConstructPhi(a) => construct(a, cache),
        Command::Zeros(a) => zeros(a),
        Command::Verify(_) => unreachable!("verify is dispatched separately"),
    }
}

fn eval_in<T: Real>(a: &EvalArgs, alpha: &AlphaParameter, f: &PeriodicFunction) -> Result<Value, CliError> {
    let prof = PrecisionProfile {
        working_digits: a.digits,
        target_tolerance: 10f64.powi(-(a.digits as i32 - 5)),
    };
    prof.validate::<T>()?;
    let s = Cx::new(T::from_f64(a.sigma), T::from_f64(a.t));
    let x: T = alpha.value();
    let r = f_eval(&s, f, &x, &prof)?;
    Ok(json!({
        "alpha": alpha.describe(),
        "sigma": a.sigma,
        "t": a.t,
        "value_re": r.value.re.to_f64(),
        "value_im": r.value.im.to_f64(),
        "error_bound": r.abs_error_bound.to_f64(),
        "pole_flag": r.pole_flag,
        "digits": a.digits,
        "value_text": [r.value.re.to_string(), r.value.im.to_string()],
    }))
}

fn eval(a: &EvalArgs) -> Result<RunOutput, CliError> {
    let f = series(&a.series)?;
    let alpha = alpha_param(&a.alpha, a.series.q)?;
    let v = match a.digits {
        0..=15 => eval_in::<f64>(a, &alpha, &f)?,
        16..=50 => eval_in::<Mp50>(a, &alpha, &f)?,
        51..=100 => eval_in::<Mp100>(a, &alpha, &f)?,
        d => return Err(usage(format!("--digits {d}: at most 100 supported"))),
    };
    Ok(RunOutput::plain(v))
}

fn decompose_cmd(a: &DecomposeArgs) -> Result<RunOutput, CliError> {
    let f = series(&a.series)?;
    let shift: RationalShift = a.alpha.parse()?;
    let lift = lift_rational(&f, shift);
    let dec = decompose(&lift.coeffs);
    let cert = detect_pl_form(&lift.coeffs, a.max_conductor);
    Ok(RunOutput::plain(json!({
        "alpha": shift.to_string(),
        "lifted_period": lift.coeffs.period(),
        "lifted_coefficients": lift.coeffs.to_text(),
        "decomposition": to_value(&dec),
        "certificate": to_value(&cert),
    })))
}

fn classify(a: &ClassifyArgs) -> Result<RunOutput, CliError> {
    let f = series(&a.series)?;
    let alpha = alpha_param(&a.alpha, a.series.q)?;
    let opts = VerdictOptions { t_max: a.t_max, conductor_cap: a.max_conductor };
    Ok(RunOutput::plain(to_value(&nonvanishing_verdict(&f, &alpha, &opts)?)))
}

fn parse_range(text: &str) -> Result<(u64, u64), CliError> {
    let (l, u) = text.split_once("..").ok_or_else(|| usage("--range: expected `N1..N2`"))?;
    let l: u64 = l.trim().parse().map_err(|_| usage(format!("--range: bad start {l:?}")))?;
    let u: u64 = u.trim().parse().map_err(|_| usage(format!("--range: bad end {u:?}")))?;
    if l > u {
        return Err(usage("--range: start exceeds end"));
    }
    Ok((l, u))
}

pub fn factor_row(rec: &IdealFactorizationRecord) -> Value {
    json!({
        "n": rec.n,
        "norm": rec.norm.to_string(),
        "admissible": rec.admissible_text(),
        "residual": rec.residual_norm.to_string(),
        "recomposes": rec.recomposes(),
    })
}

fn factor_ideals(a: &FactorArgs, cache: &FactorCache) -> Result<RunOutput, CliError> {
    use rayon::prelude::*;
    let alpha = algebraic(&a.minpoly, &a.interval, a.q)?;
    let (lo, hi) = parse_range(&a.range)?;
    if hi - lo >= 10_000_000 {
        return Err(usage("--range: at most 10^7 values per run"));
    }
    let recs: Vec<IdealFactorizationRecord> = (lo..=hi)
        .into_par_iter()
        .map(|n| alpha.ideal_factorize_cached(n, cache))
        .collect::<hurwitz_core::Result<_>>()?;
    let rows: Vec<Value> = recs.iter().map(factor_row).collect();
    let table = CsvTable {
        header: vec!["n", "norm", "admissible", "residual"],
        rows: recs
            .iter()
            .map(|r| vec![r.n.to_string(), r.norm.to_string(), r.admissible_text(), r.residual_norm.to_string()])
            .collect(),
    };
    Ok(RunOutput {
        result: json!({
            "alpha": AlphaParameter::Algebraic(alpha.clone()).describe(),
            "q": a.q,
            "all_recompose": recs.iter().all(|r| r.recomposes()),
            "rows": rows,
        }),
        csv: Some(table),
        failure: None,
    })
}

pub fn density_window(a: &DensityArgs, n_start: u64, b: u64) -> Result<WindowSpec, CliError> {
    Ok(WindowSpec::parse(n_start, &a.theta, a.q, b)?)
}

/// Report row plus an independent privacy check for eligible `n`.
pub fn density_row(alpha: &AlgebraicAlpha, w: &WindowSpec, n: u64, cache: &FactorCache) -> Result<(WindowEntry, bool), CliError> {
    let rec = alpha.ideal_factorize_cached(n, cache)?;
    let e = window_entry(&rec, w);
    let sound = match &e.private_ideal {
        Some(k) => verify_private(alpha, n, k, w.end())?,
        None => true,
    };
    Ok((e, sound))
}

fn density(a: &DensityArgs, cache: &FactorCache) -> Result<RunOutput, CliError> {
    let alpha = algebraic(&a.minpoly, &a.interval, a.q)?;
    let theta = parse_rational(&a.theta)?;
    let ns: Vec<u64> = a
        .n
        .split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|_| usage(format!("--N: bad value {s:?}"))))
        .collect::<Result<_, _>>()?;
    if let Some(b) = a.b {
        if b >= a.q {
            return Err(usage(format!("--b {b}: must be below q = {}", a.q)));
        }
    }
    let classes = a.b.map(|b| vec![b]);
    let sweep = density_sweep(&alpha, &ns, &theta, a.q, classes.as_deref(), cache)?;
    let mut rows = Vec::new();
    for r in &sweep.reports {
        for e in &r.entries {
            let (p, root) = e.private_ideal.map(|k| (k.p.to_string(), k.root.to_string())).unwrap_or_default();
            rows.push(vec![
                r.window.n_start.to_string(),
                r.window.b.to_string(),
                e.n.to_string(),
                e.norm.to_string(),
                p,
                root,
                e.smooth.to_string(),
                e.factorization.clone(),
            ]);
        }
    }
    let mut result = to_value(&sweep);
    result["alpha"] = Value::String(AlphaParameter::Algebraic(alpha).describe());
    Ok(RunOutput {
        result,
        csv: Some(CsvTable {
            header: vec!["N", "b", "n", "norm", "private_p", "private_root", "smooth", "factorization"],
            rows,
        }),
        failure: None,
    })
}

fn construct(a: &ConstructArgs, cache: &FactorCache) -> Result<RunOutput, CliError> {
    let f = series(&a.series)?;
    let alpha = algebraic(&a.minpoly, &a.interval, a.series.q)?;
    let mut profile = ConstructionProfile::by_name(&a.profile)?;
    if a.n1.is_some() {
        profile.n1_override = a.n1;
    }
    let (report, phi) = match profile.digits {
        0..=50 => {
            let (r, p) = run_construction::<Mp50>(&f, &alpha, &profile, a.stages, cache)?;
            (r, p.log().to_vec())
        }
        _ => {
            let (r, p) = run_construction::<Mp100>(&f, &alpha, &profile, a.stages, cache)?;
            (r, p.log().to_vec())
        }
    };
    let rows = phi
        .iter()
        .map(|e| {
            vec![
                e.p.to_string(),
                e.root.to_string(),
                e.stage.to_string(),
                to_value(&e.case).as_str().unwrap_or_default().to_string(),
                num(e.re),
                num(e.im),
                num(e.arg),
            ]
        })
        .collect();
    let failure = report.halted.clone();
    Ok(RunOutput {
        result: json!({ "report": to_value(&report), "phi_log": to_value(&phi) }),
        csv: Some(CsvTable { header: vec!["p", "root", "stage", "case", "re", "im", "arg"], rows }),
        failure,
    })
}

pub fn parse_grid(text: &str) -> Result<(usize, usize), CliError> {
    let (a, b) = text
        .split_once(['x', 'X', '×'])
        .ok_or_else(|| usage("--grid: expected `AxB`"))?;
    let a = a.trim().parse().map_err(|_| usage(format!("--grid: bad count {a:?}")))?;
    let b = b.trim().parse().map_err(|_| usage(format!("--grid: bad count {b:?}")))?;
    Ok((a, b))
}

/// Rational shifts go through the L-function split; other shifts through
/// the class-wise Hurwitz sum.
pub fn evaluator(a: &ZerosArgs) -> Result<Box<dyn Evaluator>, CliError> {
    let f = series(&a.series)?;
    Ok(match alpha_param(&a.alpha, a.series.q)? {
        AlphaParameter::Rational(shift) => {
            let lift = lift_rational(&f, shift);
            Box::new(DecomposedSeries::new(decompose(&lift.coeffs), shift.b()))
        }
        other => Box::new(HurwitzSeries::new(f, other.value::<f64>())),
    })
}

pub fn recompute_cell(ev: &dyn Evaluator, cell: &Value) -> Result<Value, CliError> {
    let r = &cell["rectangle"];
    let g = |k: &str| r[k].as_f64().ok_or_else(|| usage(format!("cell rectangle lacks {k}")));
    let rect = Rectangle::new(g("sigma_min")?, g("sigma_max")?, g("t_min")?, g("t_max")?)?;
    Ok(to_value(&scan_cell(ev, &rect)?))
}

fn zeros(a: &ZerosArgs) -> Result<RunOutput, CliError> {
    let ev = evaluator(a)?;
    let region = Rectangle::parse(&a.rect)?;
    let (ns, nt) = parse_grid(&a.grid)?;
    let rep = zero_search(ev.as_ref(), &region, ns, nt)?;
    let rows = rep
        .zeros
        .iter()
        .map(|z| vec![num(z.sigma), num(z.t), num(z.residual)])
        .collect();
    let mut result = to_value(&rep);
    result["function"] = Value::String(ev.describe());
    Ok(RunOutput {
        result,
        csv: Some(CsvTable { header: vec!["sigma", "t", "residual"], rows }),
        failure: None,
    })
}
