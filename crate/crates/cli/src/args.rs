use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "hurwitz", version, about = "Generalized Hurwitz zeta functions: evaluation, structure, densities, phase construction, zeros")]
pub struct Cli {
    /// Factorization cache file (append-only CSV)
    #[arg(long, global = true, env = "HURWITZ_CACHE")]
    pub cache: Option<PathBuf>,

    /// Seed for randomized choices (verification samples)
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// JSON report path (default: stdout)
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// CSV path for per-row output
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,

    /// After running, recompute a 1% sample of the report's rows
    #[arg(long, global = true)]
    pub verify: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", content = "args", rename_all = "kebab-case")]
pub enum Command {
    /// Evaluate F(s, f, alpha)
    Eval(EvalArgs),
    /// Split a rational-shift series into Dirichlet L-functions and test for the form P(s) L(s, chi)
    Decompose(DecomposeArgs),
    /// Decide whether F(s, f, alpha) has zeros in sigma > 1
    Classify(ClassifyArgs),
    /// Prime-ideal factorizations of (n + alpha) over a range of n
    FactorIdeals(FactorArgs),
    /// Private-prime density in windows (N, N + theta N]
    Density(DensityArgs),
    /// Run the phase construction for a profile
    ConstructPhi(ConstructArgs),
    /// Count and locate zeros in a rectangle
    Zeros(ZerosArgs),
    /// Recompute a 1% sample of a saved report
    #[serde(skip)]
    Verify(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval(_) => "eval",
            Command::Decompose(_) => "decompose",
            Command::Classify(_) => "classify",
            Command::FactorIdeals(_) => "factor-ideals",
            Command::Density(_) => "density",
            Command::ConstructPhi(_) => "construct-phi",
            Command::Zeros(_) => "zeros",
            Command::Verify(_) => "verify",
        }
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaArgs {
    /// `a/b`, `1`, or a decimal in (0, 1]
    #[arg(long)]
    pub alpha: Option<String>,
    /// Coefficients `c_d,...,c_0` of the minimal polynomial of an algebraic alpha
    #[arg(long, allow_hyphen_values = true)]
    pub minpoly: Option<String>,
    /// Isolating interval `l,u` for the root
    #[arg(long)]
    pub interval: Option<String>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesArgs {
    /// Values f(0),...,f(q-1); a single value is repeated. Entries may be `a/b` or `x+yi`
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub f: String,
    /// Period of f
    #[arg(long, default_value_t = 1)]
    pub q: u64,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t: f64,
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[command(flatten)]
    pub series: SeriesArgs,
    /// Working digits: up to 15 uses f64, up to 50 and 100 use multiprecision
    #[arg(long, default_value_t = 15)]
    pub digits: u32,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecomposeArgs {
    /// Rational shift `a/b`
    #[arg(long)]
    pub alpha: String,
    #[command(flatten)]
    pub series: SeriesArgs,
    /// Largest conductor tried by the single-term test (default: the period)
    #[arg(long)]
    pub max_conductor: Option<u64>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[command(flatten)]
    pub series: SeriesArgs,
    /// Height of the scan for zeros of the polynomial factor
    #[arg(long, default_value_t = 30.0)]
    pub t_max: f64,
    #[arg(long)]
    pub max_conductor: Option<u64>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub minpoly: String,
    #[arg(long)]
    pub interval: String,
    #[arg(long, default_value_t = 1)]
    pub q: u64,
    /// `N1..N2`, inclusive
    #[arg(long)]
    pub range: String,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub minpoly: String,
    #[arg(long)]
    pub interval: String,
    #[arg(long, default_value_t = 1)]
    pub q: u64,
    /// Window ratio, decimal or `a/b`
    #[arg(long)]
    pub theta: String,
    /// Window starts, comma separated
    #[arg(long = "N")]
    pub n: String,
    /// Only this class mod q
    #[arg(long)]
    pub b: Option<u64>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructArgs {
    /// `desk` or `canonical`
    #[arg(long, default_value = "desk")]
    pub profile: String,
    #[arg(long, default_value_t = 1)]
    pub stages: u32,
    #[arg(long, default_value = "1,2,-1", allow_hyphen_values = true)]
    pub minpoly: String,
    #[arg(long, default_value = "0.4,0.5")]
    pub interval: String,
    #[command(flatten)]
    pub series: SeriesArgs,
    /// Override the profile's N_1
    #[arg(long)]
    pub n1: Option<u64>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZerosArgs {
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[command(flatten)]
    pub series: SeriesArgs,
    /// `sigma1,sigma2,t1,t2`
    #[arg(long, allow_hyphen_values = true)]
    pub rect: String,
    /// Cells `a x b` (sigma by t), e.g. `2x10`
    #[arg(long, default_value = "1x1")]
    pub grid: String,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// A JSON report written by any other command
    pub report: PathBuf,
}
