//! Brute-force counts of integers in a short window owning a private prime
//! ideal, and the smooth set used for the ratio `rho`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith::cache::FactorCache;
use crate::arith::periodic::parse_rational;
use crate::error::{Error, Result};
use crate::ideal::{AlgebraicAlpha, IdealFactorizationRecord, PrimeIdealKey};

/// Lower density required in each class.
pub const DENSITY_FLOOR: f64 = 0.54;

/// `(N, N + M]` with `M = floor(theta N)`, restricted to `n = b mod q`.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowSpec {
    pub n_start: u64,
    pub theta: BigRational,
    pub q: u64,
    pub b: u64,
}

impl Serialize for WindowSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("WindowSpec", 5)?;
        st.serialize_field("N", &self.n_start)?;
        st.serialize_field("theta", &format!("{}", self.theta))?;
        st.serialize_field("M", &self.m())?;
        st.serialize_field("q", &self.q)?;
        st.serialize_field("b", &self.b)?;
        st.end()
    }
}

impl WindowSpec {
    pub fn new(n_start: u64, theta: BigRational, q: u64, b: u64) -> Result<Self> {
        if q == 0 || b >= q {
            return Err(Error::InvalidInput(format!("need 0 <= b < q, got b = {b}, q = {q}")));
        }
        if n_start <= q {
            return Err(Error::InvalidInput(format!("need N > q, got N = {n_start}, q = {q}")));
        }
        if theta <= BigRational::zero() {
            return Err(Error::InvalidInput("theta must be positive".into()));
        }
        let w = WindowSpec { n_start, theta, q, b };
        if w.m() == 0 {
            return Err(Error::InvalidInput(format!("M = floor(theta N) = 0 for N = {n_start}")));
        }
        Ok(w)
    }

    /// Parses `theta` exactly from decimal or `a/b` text.
    pub fn parse(n_start: u64, theta: &str, q: u64, b: u64) -> Result<Self> {
        Self::new(n_start, parse_rational(theta)?, q, b)
    }

    pub fn m(&self) -> u64 {
        (&self.theta * BigRational::from_integer(BigInt::from(self.n_start)))
            .floor()
            .to_integer()
            .to_u64()
            .unwrap_or(u64::MAX)
    }

    pub fn end(&self) -> u64 {
        self.n_start.saturating_add(self.m())
    }

    /// `n = b mod q` with `N < n <= N + M`.
    pub fn members(&self) -> Vec<u64> {
        let first = self.n_start + 1;
        let off = (self.b + self.q - first % self.q) % self.q;
        (first + off..=self.end()).step_by(self.q as usize).collect()
    }

    /// `0.54 M / q`.
    pub fn threshold(&self) -> f64 {
        DENSITY_FLOOR * self.m() as f64 / self.q as f64
    }
}

/// Outcome for one `n` in the window.
#[derive(Clone, Debug, Serialize)]
pub struct WindowEntry {
    pub n: u64,
    pub norm: u128,
    /// The chosen private prime ideal, if any.
    pub private_ideal: Option<PrimeIdealKey>,
    pub smooth: bool,
    pub factorization: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub window: WindowSpec,
    pub class_size: u64,
    pub entries: Vec<WindowEntry>,
    pub count_a: u64,
    pub threshold: f64,
    pub passed: bool,
    pub smooth_count: u64,
    pub rho: f64,
    pub eligible_fraction: f64,
}

impl DensityReport {
    pub fn eligible(&self) -> impl Iterator<Item = (u64, PrimeIdealKey)> + '_ {
        self.entries.iter().filter_map(|e| e.private_ideal.map(|k| (e.n, k)))
    }
}

/// `p` divides no other `(m + alpha)` with `0 <= m <= end`: the only other
/// candidates are `n +- p`.
fn is_private(n: u64, p: u128, end: u64) -> bool {
    p > n as u128 && p > (end - n) as u128
}

/// Largest admissible prime above `n` that is private in `[0, end]`.
pub fn choose_private(rec: &IdealFactorizationRecord, end: u64) -> Option<PrimeIdealKey> {
    rec.admissible
        .iter()
        .map(|(k, _)| *k)
        .filter(|k| is_private(rec.n, k.p, end))
        .max_by_key(|k| k.p)
}

/// Every admissible prime power `p^u` is below `M`.
pub fn is_smooth(rec: &IdealFactorizationRecord, m: u64) -> bool {
    rec.admissible.iter().all(|(k, u)| {
        k.p.checked_pow(*u).is_some_and(|pu| pu < m as u128)
    })
}

fn scan_records(alpha: &AlgebraicAlpha, w: &WindowSpec, cache: &FactorCache) -> Result<Vec<IdealFactorizationRecord>> {
    let members = w.members();
    if members.is_empty() {
        return Err(Error::EmptyWindow { n_start: w.n_start, n_end: w.end(), q: w.q, b: w.b });
    }
    members
        .par_iter()
        .map(|&n| alpha.ideal_factorize_cached(n, cache))
        .collect()
}

/// The report row for `n` given its factorization.
pub fn window_entry(rec: &IdealFactorizationRecord, w: &WindowSpec) -> WindowEntry {
    WindowEntry {
        n: rec.n,
        norm: rec.norm,
        private_ideal: choose_private(rec, w.end()),
        smooth: is_smooth(rec, w.m()),
        factorization: rec.admissible_text(),
    }
}

pub fn private_prime_scan(alpha: &AlgebraicAlpha, w: &WindowSpec, cache: &FactorCache) -> Result<DensityReport> {
    let m = w.m();
    let entries: Vec<WindowEntry> = scan_records(alpha, w, cache)?
        .iter()
        .map(|rec| window_entry(rec, w))
        .collect();
    let class_size = entries.len() as u64;
    let count_a = entries.iter().filter(|e| e.private_ideal.is_some()).count() as u64;
    let smooth_count = entries.iter().filter(|e| e.smooth).count() as u64;
    // count >= 0.54 M / q, compared in integers
    let passed = 100 * count_a as u128 * w.q as u128 >= 54 * m as u128;
    Ok(DensityReport {
        window: w.clone(),
        class_size,
        count_a,
        threshold: w.threshold(),
        passed,
        smooth_count,
        rho: (w.q * smooth_count) as f64 / m as f64,
        eligible_fraction: count_a as f64 / class_size as f64,
        entries,
    })
}

/// Members of the smooth set in the window.
pub fn smooth_set(alpha: &AlgebraicAlpha, w: &WindowSpec, cache: &FactorCache) -> Result<Vec<u64>> {
    let m = w.m();
    Ok(scan_records(alpha, w, cache)?
        .into_iter()
        .filter(|r| is_smooth(r, m))
        .map(|r| r.n)
        .collect())
}

/// Re-verifies privacy by scanning every `m` in `[0, N + M]` for
/// `m = root mod p`.
pub fn rescan_private(alpha: &AlgebraicAlpha, n: u64, key: &PrimeIdealKey, end: u64) -> Result<bool> {
    if !alpha.ideal_divides(key, 1, n)? {
        return Ok(false);
    }
    Ok((0..=end).filter(|&m| m != n).all(|m| (m as u128) % key.p != key.root))
}

/// Same answer as [`rescan_private`] without the scan: counts the members of
/// the class `root mod p` in `[0, N + M]` directly. Used where `N + M` is too
/// large to scan.
pub fn verify_private(alpha: &AlgebraicAlpha, n: u64, key: &PrimeIdealKey, end: u64) -> Result<bool> {
    if !alpha.is_admissible(key) || !alpha.ideal_divides(key, 1, n)? {
        return Ok(false);
    }
    let first = key.root % key.p;
    let members = if first > end as u128 { 0 } else { (end as u128 - first) / key.p + 1 };
    Ok(members == 1)
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub q: u64,
    pub theta: String,
    pub reports: Vec<DensityReport>,
    pub windows: u64,
    pub passed: u64,
    pub pass_fraction: f64,
    pub mean_eligible_fraction: f64,
}

/// All windows `(N, b)` for `N` in the list and `b` in `classes` (default
/// every class mod `q`), sorted by `(N, b)`.
pub fn density_sweep(
    alpha: &AlgebraicAlpha,
    n_list: &[u64],
    theta: &BigRational,
    q: u64,
    classes: Option<&[u64]>,
    cache: &FactorCache,
) -> Result<SweepReport> {
    if n_list.is_empty() {
        return Err(Error::InvalidInput("empty list of N".into()));
    }
    let all: Vec<u64> = (0..q).collect();
    let classes = classes.unwrap_or(&all);
    let mut windows = Vec::new();
    for &n in n_list {
        for &b in classes {
            windows.push(WindowSpec::new(n, theta.clone(), q, b)?);
        }
    }
    let mut reports: Vec<DensityReport> = windows
        .par_iter()
        .map(|w| private_prime_scan(alpha, w, cache))
        .collect::<Result<_>>()?;
    reports.sort_by_key(|r| (r.window.n_start, r.window.b));
    let passed = reports.iter().filter(|r| r.passed).count() as u64;
    let total = reports.len() as u64;
    let mean = reports.iter().map(|r| r.eligible_fraction).sum::<f64>() / total as f64;
    Ok(SweepReport {
        q,
        theta: theta.to_string(),
        windows: total,
        passed,
        pass_fraction: passed as f64 / total as f64,
        mean_eligible_fraction: mean,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn sqrt2m1() -> AlgebraicAlpha {
        AlgebraicAlpha::new(&[1, 2, -1], "0.4", "0.5", 1).unwrap()
    }

    #[test]
    fn window_arithmetic() {
        let w = WindowSpec::parse(20_000_000, "1e-6", 1, 0).unwrap();
        assert_eq!(w.m(), 20);
        assert_eq!(w.members().len(), 20);
        let w = WindowSpec::parse(100, "0.1", 3, 2).unwrap();
        assert_eq!(w.members(), vec![101, 104, 107, 110]);
        assert!((w.threshold() - 0.54 * 10.0 / 3.0).abs() < 1e-12);
        assert!(WindowSpec::parse(100, "0.001", 1, 0).is_err());
        assert!(WindowSpec::parse(3, "1", 3, 0).is_err());
    }

    #[test]
    fn small_window_examples() {
        let a = sqrt2m1();
        let cache = FactorCache::in_memory();
        let w = WindowSpec::parse(100, "0.1", 1, 0).unwrap();
        let r = private_prime_scan(&a, &w, &cache).unwrap();
        let get = |n: u64| r.entries.iter().find(|e| e.n == n).unwrap();
        assert_eq!(get(101).norm, 9998);
        assert_eq!(get(101).private_ideal.unwrap().p, 4999);
        assert!(get(102).private_ideal.is_none());
        assert_eq!(get(107).private_ideal.unwrap().p, 137);
        assert!(!get(101).smooth);
        assert_eq!(r.count_a as usize, r.eligible().count());
        for (n, k) in r.eligible() {
            assert!(rescan_private(&a, n, &k, w.end()).unwrap());
        }
        let s = smooth_set(&a, &w, &cache).unwrap();
        assert_eq!(s, r.entries.iter().filter(|e| e.smooth).map(|e| e.n).collect::<Vec<_>>());
    }

    #[test]
    fn empty_window() {
        // q = 50, M = 10: class 49 misses (100, 110]
        let w = WindowSpec::parse(100, "0.1", 50, 49).unwrap();
        let err = private_prime_scan(&sqrt2m1(), &w, &FactorCache::in_memory()).unwrap_err();
        assert!(matches!(err, Error::EmptyWindow { .. }));
    }

    #[test]
    fn shortcut_agrees_with_rescan() {
        let a = sqrt2m1();
        let cache = FactorCache::in_memory();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n0 = rng.gen_range(200..5000u64);
            let w = WindowSpec::parse(n0, "0.05", 1, 0).unwrap();
            let n = rng.gen_range(n0 + 1..=w.end());
            let rec = a.ideal_factorize_cached(n, &cache).unwrap();
            for (k, _) in &rec.admissible {
                let scanned = rescan_private(&a, n, k, w.end()).unwrap();
                assert_eq!(is_private(n, k.p, w.end()), scanned, "{n} {k}");
                assert_eq!(verify_private(&a, n, k, w.end()).unwrap(), scanned, "{n} {k}");
            }
        }
    }

    #[test]
    fn sweep_is_sorted_and_complete() {
        let a = sqrt2m1();
        let theta = parse_rational("0.01").unwrap();
        let r = density_sweep(&a, &[5000, 3000], &theta, 3, None, &FactorCache::in_memory()).unwrap();
        assert_eq!(r.windows, 6);
        let keys: Vec<_> = r.reports.iter().map(|r| (r.window.n_start, r.window.b)).collect();
        assert_eq!(keys, vec![(3000, 0), (3000, 1), (3000, 2), (5000, 0), (5000, 1), (5000, 2)]);
    }

    #[test]
    fn shrinking_admissible_set_never_adds() {
        // a larger q makes more primes inadmissible
        let cache = FactorCache::in_memory();
        let theta = parse_rational("0.02").unwrap();
        let big = sqrt2m1();
        let small = big.with_q(2 * 3 * 5 * 7 * 11 * 13).unwrap();
        for n0 in [1000u64, 2500, 7000] {
            let w = WindowSpec::new(n0, theta.clone(), 1, 0).unwrap();
            let r1 = private_prime_scan(&big, &w, &cache).unwrap();
            let r2 = private_prime_scan(&small, &w, &cache).unwrap();
            for (e1, e2) in r1.entries.iter().zip(&r2.entries) {
                assert!(e1.private_ideal.is_some() || e2.private_ideal.is_none());
            }
        }
    }
}
