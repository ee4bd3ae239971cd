use hurwitz_core::arith::is_prime;
use hurwitz_core::factorize;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[test]
fn random_u64_recompose() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    let ns: Vec<u64> = (0..100_000).map(|_| rng.gen_range(2..=u64::MAX)).collect();
    ns.par_iter().for_each(|&n| {
        let f = factorize(n as u128);
        let mut acc: u128 = 1;
        for &(p, e) in &f.factors {
            assert!(is_prime(p), "{p} in factorization of {n} is composite");
            acc *= p.pow(e);
        }
        assert_eq!(acc, n as u128);
    });
}
