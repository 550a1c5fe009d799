use std::path::PathBuf;

use berryquench_core::{KinkMethod, PairCounting, PhaseConvention};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "berryquench",
    version,
    about = "Geometric phase and defect production in a quenched XY spin chain",
    args_override_self = true,
    allow_negative_numbers = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-mode phase Γ_k along the quench, as CSV.
    Trace(TraceArgs),
    /// Kink count and final-state phase for one quench, as JSON.
    Quench(QuenchArgs),
    /// Kink density over a range of quench times with a power-law fit.
    Sweep(SweepArgs),
    /// Brute-force Ising final-state sums against the closed forms.
    Audit(AuditArgs),
    /// Run a validation suite and report pass/fail.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat `key = value` file supplying defaults for any flag.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    #[value(name = "analytic-lz", alias = "analytic", alias = "lz")]
    AnalyticLz,
    #[value(name = "numeric-ode", alias = "numeric", alias = "ode")]
    NumericOde,
}

impl From<MethodArg> for KinkMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::AnalyticLz => KinkMethod::AnalyticLz,
            MethodArg::NumericOde => KinkMethod::NumericOde,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Raw,
    #[value(name = "mod2pi", alias = "mod-2pi")]
    Mod2Pi,
}

impl From<ConventionArg> for PhaseConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Raw => PhaseConvention::Raw,
            ConventionArg::Mod2Pi => PhaseConvention::Mod2Pi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountingArg {
    PositiveK,
    BothSigns,
}

impl From<CountingArg> for PairCounting {
    fn from(c: CountingArg) -> Self {
        match c {
            CountingArg::PositiveK => PairCounting::PositiveK,
            CountingArg::BothSigns => PairCounting::BothSigns,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Oracle,
    Lz,
    Sums,
    All,
}

#[derive(Debug, Clone, Args)]
#[command(
    allow_negative_numbers = true,
    group(ArgGroup::new("mode").required(true).args(["k", "k_index"]))
)]
pub struct TraceArgs {
    /// Chain size; required with --k-index.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0.2)]
    pub alpha: f64,
    /// Momentum in radians.
    #[arg(long)]
    pub k: Option<f64>,
    /// 1-based index j on the grid k_j = (2j - 1)π/N.
    #[arg(long, requires = "n")]
    pub k_index: Option<usize>,
    /// Quench times, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub tau_q: Vec<f64>,
    #[arg(long, default_value_t = -3.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 0.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 301)]
    pub samples: usize,
    /// One file per quench time instead of a long-format `tau_q` column.
    #[arg(long)]
    pub split: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct QuenchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long)]
    pub tau_q: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::AnalyticLz)]
    pub method: MethodArg,
    /// Convention of the per-mode phases in the final-state report.
    #[arg(long, value_enum, default_value_t = ConventionArg::Raw)]
    pub convention: ConventionArg,
    /// Also run the other method and report the relative difference.
    #[arg(long)]
    pub cross_check: bool,
    #[arg(long, value_enum, default_value_t = CountingArg::PositiveK)]
    pub counting: CountingArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Explicit quench times, comma separated; overrides the log-spaced range.
    #[arg(long, value_delimiter = ',')]
    pub tau_q: Vec<f64>,
    #[arg(long, default_value_t = 10.0)]
    pub tau_q_min: f64,
    #[arg(long, default_value_t = 1000.0)]
    pub tau_q_max: f64,
    /// Number of log-spaced quench times.
    #[arg(long, default_value_t = 9)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::AnalyticLz)]
    pub method: MethodArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct AuditArgs {
    /// Chain sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "5")]
    pub n: Vec<usize>,
    /// Numbers of defect pairs; every admissible value when omitted.
    #[arg(long, value_delimiter = ',')]
    pub defects: Vec<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Loop steps for the oracle suite.
    #[arg(long, default_value_t = 1024)]
    pub steps: usize,
    /// Chain size for the Landau-Zener suite.
    #[arg(long, default_value_t = 101)]
    pub n: usize,
    /// Quench times for the Landau-Zener suite.
    #[arg(long, value_delimiter = ',', default_value = "20,50,100")]
    pub tau_q: Vec<f64>,
    #[command(flatten)]
    pub common: Common,
}
