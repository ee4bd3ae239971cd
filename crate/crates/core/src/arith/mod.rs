//! Exact integer arithmetic, polynomials, characters and periodic coefficients.

pub mod cache;
pub mod character;
pub mod cyclotomic;
pub mod periodic;
pub mod poly;
pub mod prime;

pub use cache::FactorCache;
pub use character::{characters_mod, DirichletCharacter};
pub use cyclotomic::Cyclotomic;
pub use periodic::{CRational, PeriodicFunction};
pub use poly::{poly_roots_mod_prime_power, IntPoly};
pub use prime::{factorize, is_prime, Factorization};
