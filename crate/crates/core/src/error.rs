use thiserror::Error;

/// Errors raised anywhere in the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("polynomial vanishes identically modulo {p}")]
    ZeroPolynomialModP { p: u128 },

    #[error("root {root} modulo {p} is not simple; cannot lift to exponent {v}")]
    NonSimpleRoot { p: u128, root: u128, v: u32 },

    #[error("s = 1 is a pole")]
    PoleAtOne,

    #[error("shift x = {0} is outside (0, 1]")]
    InvalidShift(f64),

    #[error("tail sum diverges for sigma = {0} <= 1")]
    DivergesAtOne(f64),

    #[error("requested tolerance {requested:e} not reached (best bound {achieved:e})")]
    ToleranceUnreachable { requested: f64, achieved: f64 },

    #[error("alpha given only as an untyped float; its arithmetic type is required here")]
    UnsupportedAlpha,

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("no integers n = {b} mod {q} in window ({n_start}, {n_end}]")]
    EmptyWindow { n_start: u64, n_end: u64, q: u64, b: u64 },

    #[error("target modulus {target:e} outside reachable annulus [{inner:e}, {outer:e}]")]
    Unreachable { target: f64, inner: f64, outer: f64 },

    #[error("working precision cannot separate: {0}")]
    PrecisionExhausted(String),

    #[error("class {b}: only {size} integers with a private prime, need {required}")]
    ThinClass { b: u64, size: usize, required: usize },

    #[error("phase for prime ideal ({p}, {root}) already assigned")]
    PhiReassigned { p: u128, root: u128 },

    #[error("inconsistent construction profile: {0}")]
    InconsistentProfile(String),

    #[error("|F| too small on the boundary near {sigma} + {t}i; perturb the rectangle")]
    BoundaryTooCloseToZero { sigma: f64, t: f64 },

    #[error("minimal polynomial irreducibility could not be certified: {0}")]
    IrreducibilityUnproven(String),

    #[error("factor cache: {0}")]
    Cache(String),
}

impl Error {
    /// Domain errors (as opposed to usage errors) map to exit status 2 in the CLI.
    pub fn is_domain_error(&self) -> bool {
        !matches!(self, Error::InvalidInput(_) | Error::Cache(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
