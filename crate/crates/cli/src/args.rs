use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "otto",
    version,
    about = "Qubit Otto engines fueled by a hot bath, projective measurements or generalized measurements"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Run one cycle and print its energy ledger.
    Cycle,
    /// Work against transition probability: two-bath engines and the optimal PVM engine.
    Fig2,
    /// Optimized POVM work, its reset-cost lower bound and net work against transition probability.
    Fig3,
    /// Swap-protocol reset cost against reset temperature, with the crossing temperature.
    Fig4,
    /// Efficiency and optimal work of the three engine classes side by side.
    Table1,
    /// Search SU(4) dilations for the best POVM work at one operating point.
    OptimizePovm,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Cycle => "cycle",
            Command::Fig2 => "fig2",
            Command::Fig3 => "fig3",
            Command::Fig4 => "fig4",
            Command::Table1 => "table1",
            Command::OptimizePovm => "optimize-povm",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Conventional,
    Pvm,
    Povm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Panel {
    /// Gaps (ω_x, ω_z) = (3, 2).
    A,
    /// Gaps (ω_x, ω_z) = (5, 2).
    B,
}

impl Panel {
    pub fn gaps(self) -> (f64, f64) {
        match self {
            Panel::A => (3.0, 2.0),
            Panel::B => (5.0, 2.0),
        }
    }
}

/// Flags shared by every subcommand; each subcommand rejects the ones it does not use.
#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// Engine for `cycle`.
    #[arg(long, global = true, value_enum)]
    pub engine: Option<Engine>,
    /// Gap of the stroke-III Hamiltonian.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub omega_x: Option<f64>,
    /// Gap of the stroke-I Hamiltonian.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub omega_z: Option<f64>,
    /// Cold-bath inverse temperature.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub beta_c: Option<f64>,
    /// Hot-bath inverse temperature (conventional engine only).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub beta_h: Option<f64>,
    /// Transition probability of the drive, in [1/2, 1]; 1 is adiabatic.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub p: Option<f64>,
    /// Drive phase.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Polar angle of the measurement basis, in [0, π].
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Azimuth of the measurement basis.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Use the swap dilation for the POVM engine.
    #[arg(long, global = true)]
    pub v0: bool,
    /// File with 15 SU(4) coefficients for the POVM dilation (`#` starts a comment).
    #[arg(long, global = true)]
    pub su4_file: Option<PathBuf>,
    /// Auxiliary reset temperature; the grid end for `fig4`.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub t_c: Option<f64>,
    /// Number of sweep points.
    #[arg(long, global = true)]
    pub grid_points: Option<usize>,
    /// Optimizer seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Annealing iterations per restart; local refinement gets twice as many evaluations.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Omit the timestamp so identical runs give identical bytes.
    #[arg(long, global = true)]
    pub deterministic: bool,
    /// Gap preset for `fig2` and `fig3`.
    #[arg(long, global = true, value_enum)]
    pub panel: Option<Panel>,
    /// Exit with status 3 when an optimizer run misses its tolerance.
    #[arg(long, global = true)]
    pub strict: bool,
}

/// Flag identifiers for per-subcommand validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    Engine,
    OmegaX,
    OmegaZ,
    BetaC,
    BetaH,
    P,
    Alpha,
    Theta,
    Phi,
    V0,
    Su4File,
    TC,
    GridPoints,
    Seed,
    Budget,
    Panel,
    Strict,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::Engine => "--engine",
            Flag::OmegaX => "--omega-x",
            Flag::OmegaZ => "--omega-z",
            Flag::BetaC => "--beta-c",
            Flag::BetaH => "--beta-h",
            Flag::P => "--p",
            Flag::Alpha => "--alpha",
            Flag::Theta => "--theta",
            Flag::Phi => "--phi",
            Flag::V0 => "--v0",
            Flag::Su4File => "--su4-file",
            Flag::TC => "--t-c",
            Flag::GridPoints => "--grid-points",
            Flag::Seed => "--seed",
            Flag::Budget => "--budget",
            Flag::Panel => "--panel",
            Flag::Strict => "--strict",
        }
    }
}

impl Opts {
    /// Flags present on the command line, in declaration order. `--out`, `--format` and
    /// `--deterministic` are accepted everywhere and not listed.
    pub fn present(&self) -> Vec<Flag> {
        [
            (Flag::Engine, self.engine.is_some()),
            (Flag::OmegaX, self.omega_x.is_some()),
            (Flag::OmegaZ, self.omega_z.is_some()),
            (Flag::BetaC, self.beta_c.is_some()),
            (Flag::BetaH, self.beta_h.is_some()),
            (Flag::P, self.p.is_some()),
            (Flag::Alpha, self.alpha.is_some()),
            (Flag::Theta, self.theta.is_some()),
            (Flag::Phi, self.phi.is_some()),
            (Flag::V0, self.v0),
            (Flag::Su4File, self.su4_file.is_some()),
            (Flag::TC, self.t_c.is_some()),
            (Flag::GridPoints, self.grid_points.is_some()),
            (Flag::Seed, self.seed.is_some()),
            (Flag::Budget, self.budget.is_some()),
            (Flag::Panel, self.panel.is_some()),
            (Flag::Strict, self.strict),
        ]
        .into_iter()
        .filter_map(|(f, on)| on.then_some(f))
        .collect()
    }
}
