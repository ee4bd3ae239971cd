//! Hurwitz zeta and generalized Hurwitz zeta evaluation.

pub mod bernoulli;
pub mod hurwitz;
pub mod series;

pub use hurwitz::{hurwitz_regular, hurwitz_zeta, hurwitz_zeta_any, ComplexPoint, EvalResult, PrecisionProfile};
pub use series::{abs_head_with_error, abs_tail, abs_tail_with_error, class_head, class_tail, direct_f_sum, f_eval};
