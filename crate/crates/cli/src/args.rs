use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qdp",
    version,
    about = "Privacy budgets of noisy quantum circuits under Steane error correction"
)]
pub struct Cli {
    /// key=value file supplying defaults; command-line flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the effective error rate and privacy budget of one scenario.
    Budget(BudgetArgs),
    /// Sweep one parameter and write a CSV of budgets.
    Sweep(SweepArgs),
    /// Print the error rate below which one round of correction helps.
    Threshold,
    /// Choose how many gates to correct, and at which level, to reach a target budget.
    Plan(PlanArgs),
    /// Run a validation suite; exits 1 on the first failure.
    Validate(ValidateArgs),
}

/// Channel and circuit parameters shared by several subcommands.
#[derive(Debug, Args, Clone, Default)]
pub struct ScenarioArgs {
    /// Depolarizing error rate per gate [default: 0.03]
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    /// Trace distance between neighbouring inputs [default: 0.5]
    #[arg(long, allow_negative_numbers = true)]
    pub d: Option<f64>,
    /// Hilbert-space dimension [default: 2]
    #[arg(long)]
    pub dim: Option<u32>,
    /// Number of single-qubit gates in the circuit [default: 1]
    #[arg(long, visible_alias = "n")]
    pub gates: Option<u32>,
    /// Number of gates followed by error correction [default: 0]
    #[arg(long = "qec-gates", visible_alias = "m")]
    pub qec_gates: Option<u32>,
    /// Concatenation level of the correcting code [default: 1]
    #[arg(long)]
    pub level: Option<u32>,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Also write the result as CSV to this path.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    P,
    D,
    M,
    Level,
    N,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::P => "p",
            SweepParam::D => "d",
            SweepParam::M => "m",
            SweepParam::Level => "level",
            SweepParam::N => "n",
        }
    }

    pub fn is_integer(self) -> bool {
        matches!(self, SweepParam::M | SweepParam::Level | SweepParam::N)
    }
}

impl std::str::FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Parameter to vary.
    #[arg(long, value_enum)]
    pub param: Option<SweepParam>,
    /// First value of the sweep.
    #[arg(long, allow_negative_numbers = true)]
    pub from: Option<f64>,
    /// Last value of the sweep.
    #[arg(long, allow_negative_numbers = true)]
    pub to: Option<f64>,
    /// Number of points for p and d [default: 100]; for integer parameters,
    /// if given, it must equal the number of integers in the range.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Output file; standard output when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub scenario: ScenarioArgs,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    /// Privacy budget to reach.
    #[arg(long, allow_negative_numbers = true)]
    pub target: Option<f64>,
    /// Highest concatenation level to consider [default: 3]
    #[arg(long = "max-level")]
    pub max_level: Option<u32>,
    #[command(flatten)]
    pub scenario: ScenarioArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Syndromes,
    Montecarlo,
    Dp,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub suite: Suite,
    /// Error rate [default: 0.03]
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    /// Trace distance (dp) [default: 0.5]
    #[arg(long, allow_negative_numbers = true)]
    pub d: Option<f64>,
    /// Hilbert-space dimension (dp) [default: 2]
    #[arg(long)]
    pub dim: Option<u32>,
    /// Number of Monte Carlo trials [default: 100000]
    #[arg(long)]
    pub trials: Option<u64>,
    /// Monte Carlo backend: pauli_frame or circuit [default: pauli_frame]
    #[arg(long)]
    pub backend: Option<String>,
    /// Concatenation level (montecarlo) [default: 1]
    #[arg(long)]
    pub level: Option<u32>,
    /// State pairs to sample (dp) [default: 1000]
    #[arg(long)]
    pub pairs: Option<usize>,
    /// POVMs per pair (dp) [default: 20]
    #[arg(long)]
    pub povms: Option<usize>,
    /// Random seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
}
