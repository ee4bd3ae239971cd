use hurwitz_core::construction::phi_of;
use hurwitz_core::zeros::DecomposedSeries;
use hurwitz_core::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn p64() -> PrecisionProfile {
    PrecisionProfile::for_scalar::<f64>()
}

#[test]
fn half_shift_identity_grid() {
    for i in 0..5 {
        for j in 0..5 {
            let s = Cx::new(-1.0 + i as f64, 5.0 * j as f64);
            if s == Cx::new(1.0, 0.0) {
                continue;
            }
            let half = hurwitz_zeta(&s, &0.5, &p64()).unwrap().value;
            let one = hurwitz_zeta(&s, &1.0, &p64()).unwrap().value;
            let two_s = (s * 2f64.ln()).exp();
            let gap = (half - (two_s - 1.0) * one).norm();
            assert!(gap < 1e-10, "s = {s}: {gap:e}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn split_matches_explicit_hurwitz_sum(
        vals in prop::collection::vec(-3i64..4, 1..7),
        alpha in 0.05f64..=1.0,
        sigma in -1.0f64..4.0,
        t in 0.5f64..25.0,
    ) {
        prop_assume!(vals.iter().any(|&v| v != 0));
        let f = PeriodicFunction::from_ints(&vals).unwrap();
        let q = vals.len() as f64;
        let s = Cx::new(sigma, t);
        // small shifts (r + alpha)/q cost a few digits in f64
        let prof = p64().with_tolerance(1e-8);
        let got = f_eval(&s, &f, &alpha, &prof).unwrap();
        let mut sum = Cx::new(0.0, 0.0);
        let mut err = 0.0;
        for (r, &v) in vals.iter().enumerate() {
            if v == 0 {
                continue;
            }
            let z = hurwitz_zeta(&s, &((r as f64 + alpha) / q), &prof).unwrap();
            sum += z.value * v as f64;
            err += z.abs_error_bound * v.abs() as f64;
        }
        let qs = (-s * q.ln()).exp();
        let want = qs * sum;
        let bound = got.abs_error_bound + err * qs.norm() + 1e-14 * want.norm();
        prop_assert!((got.value - want).norm() <= bound, "{} vs {} (bound {:e})", got.value, want, bound);
    }

    #[test]
    fn tail_diverges_towards_one(
        vals in prop::collection::vec(-3i64..4, 1..7),
        alpha in 0.05f64..=1.0,
    ) {
        prop_assume!(vals.iter().any(|&v| v != 0));
        let f = PeriodicFunction::from_ints(&vals).unwrap();
        let tails: Vec<f64> = (1..=6)
            .map(|k| abs_tail(&f, &alpha, &(1.0 + 10f64.powi(-k)), 0, &p64()).unwrap())
            .collect();
        prop_assert!(tails.windows(2).all(|w| w[1] > w[0]), "{:?}", tails);
    }
}

#[test]
fn norms_multiply_on_random_n() {
    let alpha = AlgebraicAlpha::new(&[1, 2, -1], "0.4", "0.5", 1).unwrap();
    let golden = AlgebraicAlpha::new(&[1, 1, -1], "0.6", "0.7", 6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let n = rng.gen_range(0..4_000_000_000u64);
        for a in [&alpha, &golden] {
            let r = a.ideal_factorize(n).unwrap();
            let prod = r.admissible.iter().fold(r.residual_norm, |acc, (k, u)| acc * k.p.pow(*u));
            assert_eq!(prod, a.norm_value(n).unwrap(), "n = {n}");
        }
    }
}

#[test]
fn refined_zeros_lie_in_their_cells() {
    let f = PeriodicFunction::from_ints(&[1, -2]).unwrap();
    let lift = lift_rational(&f, RationalShift::new(1, 1).unwrap());
    let ev = DecomposedSeries::new(decompose(&lift.coeffs), 1);
    let rep = zero_search(&ev, &Rectangle::new(1.2, 2.0, -20.0, 20.0).unwrap(), 3, 7).unwrap();
    assert_eq!(rep.zeros.len(), 5);
    for c in &rep.cells {
        assert_eq!(c.refined_zeros.len() as i64, c.winding);
        for z in &c.refined_zeros {
            assert!(c.rectangle.contains(Cx::new(z.sigma, z.t), 0.0));
            assert!(z.residual < 1e-8);
        }
    }
    // conjugate pairs
    for z in &rep.zeros {
        assert!(rep.zeros.iter().any(|w| (w.sigma - z.sigma).abs() < 1e-9 && (w.t + z.t).abs() < 1e-7));
    }
}

#[test]
fn twisted_values_stay_unimodular() {
    let f = PeriodicFunction::from_ints(&[1, 2]).unwrap();
    let alpha = AlgebraicAlpha::new(&[1, 2, -1], "0.4", "0.5", 2).unwrap();
    let cache = FactorCache::in_memory();
    let (rep, phi) = run_construction::<Mp50>(&f, &alpha, &ConstructionProfile::desk(), 3, &cache).unwrap();
    assert!(rep.halted.is_none());
    let last = rep.stages.last().unwrap().n_next;
    for n in 0..=last {
        let v = phi_of(&alpha.ideal_factorize_cached(n, &cache).unwrap(), &phi);
        assert!((complex::abs(&v) - Mp50::from_i64(1)).abs().to_f64() < 1e-14, "n = {n}");
    }
    for c in rep.stages.iter().flat_map(|s| &s.classes) {
        assert!(!c.ratio_applicable || c.ratio_ok, "class {} at stage ratio {}", c.b, c.ratio);
    }
}
