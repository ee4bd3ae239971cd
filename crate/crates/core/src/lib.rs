//! Generalized Hurwitz zeta functions `F(s, f, alpha) = sum_{n>=0} f(n) (n + alpha)^{-s}`
//! with `f` periodic: evaluation, structure for rational `alpha`, prime-ideal
//! bookkeeping for algebraic `alpha`, the vanishing-twist construction and
//! zero location.
//!
//! Numeric code is generic over [`Real`]; `f64` is the fast tier and
//! [`Mp50`] / [`Mp100`] are the multiprecision tiers.

pub mod alpha;
pub mod arith;
pub mod complex;
pub mod construction;
pub mod density;
pub mod error;
pub mod ideal;
pub mod scalar;
pub mod structure;
pub mod verdict;
pub mod zeros;
pub mod zeta;

pub use alpha::{AlphaParameter, RationalShift};
pub use arith::{characters_mod, factorize, poly_roots_mod_prime_power, CRational, DirichletCharacter, FactorCache, PeriodicFunction};
pub use complex::Cx;
pub use construction::{bohr_solve, run_construction, select_sigma, ConstructionProfile, ConstructionReport, PhiAssignment};
pub use density::{density_sweep, private_prime_scan, DensityReport, SweepReport, WindowSpec};
pub use error::{Error, Result};
pub use ideal::{AlgebraicAlpha, IdealFactorizationRecord, PrimeIdealKey};
pub use scalar::{Mp, Real};
pub use structure::{decompose, detect_pl_form, lift_rational, DecompositionResult, DirichletPolynomial, PlCertificate, PlVerdict, ProofKind};
pub use verdict::{nonvanishing_verdict, Verdict, VerdictOptions, VerdictReport};
pub use zeros::{scan_cell, winding_number, zero_search, Evaluator, Rectangle, WindingResult, ZeroSearchReport};
pub use zeta::{abs_tail, f_eval, hurwitz_zeta, ComplexPoint, EvalResult, PrecisionProfile};

/// 50 significant decimal digits.
pub type Mp50 = Mp<170>;
/// 100 significant decimal digits.
pub type Mp100 = Mp<340>;
