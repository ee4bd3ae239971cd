//! Even-index Bernoulli numbers, exact, computed once.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::scalar::Real;

/// Largest `k` for which `B_{2k}/(2k)!` is tabulated.
pub const MAX_K: usize = 64;

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..n {
        let next = &row[k] * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

fn bernoulli_all(n_max: usize) -> Vec<BigRational> {
    // sum_{k=0}^{n} C(n+1, k) B_k = 0
    let mut b = vec![BigRational::one()];
    for n in 1..=n_max {
        let row = binomial_row(n + 1);
        let mut acc = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += bk * BigRational::from_integer(row[k].clone());
        }
        b.push(-acc / BigRational::from_integer(row[n].clone()));
    }
    b
}

struct Table {
    bernoulli: Vec<BigRational>,
    scaled: Vec<BigRational>,
    scaled_f64: Vec<f64>,
}

fn table() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| {
        let all = bernoulli_all(2 * MAX_K + 2);
        let mut fact = BigInt::one();
        let mut scaled = Vec::new();
        let mut bernoulli = Vec::new();
        for n in 0..=2 * MAX_K + 2 {
            if n > 0 {
                fact *= BigInt::from(n);
            }
            if n % 2 == 0 {
                bernoulli.push(all[n].clone());
                scaled.push(&all[n] / BigRational::from_integer(fact.clone()));
            }
        }
        let scaled_f64 = scaled
            .iter()
            .map(|r| r.to_f64().expect("finite"))
            .collect();
        Table { bernoulli, scaled, scaled_f64 }
    })
}

/// `B_{2k}`.
pub fn b2k(k: usize) -> &'static BigRational {
    &table().bernoulli[k]
}

/// `B_{2k} / (2k)!` as an exact rational.
pub fn b2k_over_fact(k: usize) -> &'static BigRational {
    &table().scaled[k]
}

/// `B_{2k} / (2k)!` in the scalar type.
pub fn b2k_over_fact_in<T: Real>(k: usize) -> T {
    if T::MANTISSA_BITS <= 53 {
        T::from_f64(table().scaled_f64[k])
    } else {
        T::from_ratio(&table().scaled[k])
    }
}
