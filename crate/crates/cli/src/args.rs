use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "dicke2p",
    version,
    about = "Two-photon Dicke model: mean field, fluctuations, exact diagonalization"
)]
#[command(arg_required_else_help = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Mean-field ground state (both β branches; with --g1 the linear extension)
    Meanfield,
    /// Gaussian fluctuations around the mean field
    Fluctuations,
    /// Scan g and write one record per grid point
    Sweep,
    /// Exact diagonalization; three or more cutoffs give a convergence report
    Ed,
    /// Fit the critical exponents below g_t and compare with the references
    Exponents,
    /// Level spacing versus g at two cutoffs, probing the spectral collapse
    Collapse,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Meanfield => "meanfield",
            Command::Fluctuations => "fluctuations",
            Command::Sweep => "sweep",
            Command::Ed => "ed",
            Command::Exponents => "exponents",
            Command::Collapse => "collapse",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Coupling {
    Two,
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Parity {
    Even,
    Odd,
    Both,
}

/// Every flag is optional so that config-file values can fill the gaps.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// cavity frequency ω [default: 1]
    #[arg(long, global = true)]
    pub omega: Option<f64>,
    /// qubit splitting ω_q [default: 0.005]
    #[arg(long = "omega-q", global = true, conflicts_with = "lambda")]
    pub omega_q: Option<f64>,
    /// number of qubits [default: 100]
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// coupling g [default: 0.2]
    #[arg(long, global = true)]
    pub g: Option<f64>,
    /// linear (one-photon) admixture g1
    #[arg(long, global = true)]
    pub g1: Option<f64>,
    /// coupling order [default: two]
    #[arg(long, global = true, value_enum)]
    pub coupling: Option<Coupling>,
    /// sets ω_q = ω/(2λN)
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    /// grid points [default: 200 for sweep, 5 for collapse]
    #[arg(long, global = true)]
    pub points: Option<usize>,
    #[arg(long = "g-min", global = true)]
    pub g_min: Option<f64>,
    #[arg(long = "g-max", global = true)]
    pub g_max: Option<f64>,
    /// comma-separated Fock cutoffs
    #[arg(long, global = true, value_delimiter = ',')]
    pub cutoffs: Option<Vec<usize>>,
    /// number of lowest eigenstates
    #[arg(long, global = true)]
    pub k: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub parity: Option<Parity>,
    /// near-critical guard on |g − g_t|/g_t [default: 0.1/N]
    #[arg(long, global = true)]
    pub guard: Option<f64>,
    /// attach the ED photon number to sweeps at this cutoff; also adds the
    /// finite-N crossover to `exponents`
    #[arg(long = "ed-cutoff", global = true)]
    pub ed_cutoff: Option<usize>,
    /// output file [default: stdout]
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// output format [default: json, or csv for a .csv output path]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// flat `key = value` file; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// seed for the iterative eigensolver start vectors
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}
