//! Merging of flags, config file and defaults into one run description.

use std::fs;
use std::path::PathBuf;

use dicke_core::ed::{SolveOptions, SolverChoice};
use dicke_core::fluctuations::FluctuationConfig;
use dicke_core::{BasisSpec, CouplingOrder, ModelParams, ParitySector};

use crate::args::{Command, Common, Coupling, Format, Parity};
use crate::CliError;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub params: ModelParams,
    pub points: Option<usize>,
    pub g_min: Option<f64>,
    pub g_max: Option<f64>,
    pub cutoffs: Vec<usize>,
    pub k: Option<usize>,
    pub parity: ParitySector,
    pub fluctuations: FluctuationConfig,
    pub ed_cutoff: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Format,
    /// format was asked for, by flag, file or output extension
    pub format_explicit: bool,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn basis(&self, cutoff: usize) -> BasisSpec {
        BasisSpec::new(self.params.n_qubits, cutoff, self.parity)
    }

    pub fn solve_options(&self, default_k: usize) -> SolveOptions {
        let mut opts = SolveOptions::default()
            .with_k(self.k.unwrap_or(default_k))
            .with_solver(SolverChoice::Auto);
        if let Some(seed) = self.seed {
            opts.lanczos.seed = seed;
        }
        opts
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("config key `{key}`: cannot parse `{value}`")))
}

fn parse_enum<T: clap::ValueEnum>(key: &str, value: &str) -> Result<T, CliError> {
    T::from_str(value, true).map_err(|_| CliError::Usage(format!("config key `{key}`: invalid value `{value}`")))
}

/// Fills unset fields of `flags` from a `key = value` file. Keys are the
/// long flag names; `_` and `-` are interchangeable.
pub fn apply_file(flags: &mut Common, text: &str) -> Result<(), CliError> {
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        macro_rules! fill {
            ($field:ident, $v:expr) => {
                if flags.$field.is_none() {
                    flags.$field = Some($v);
                }
            };
        }
        match key.as_str() {
            "omega" => fill!(omega, parse_value(&key, value)?),
            "omega-q" => fill!(omega_q, parse_value(&key, value)?),
            "n" => fill!(n, parse_value(&key, value)?),
            "g" => fill!(g, parse_value(&key, value)?),
            "g1" => fill!(g1, parse_value(&key, value)?),
            "coupling" => fill!(coupling, parse_enum(&key, value)?),
            "lambda" => fill!(lambda, parse_value(&key, value)?),
            "points" => fill!(points, parse_value(&key, value)?),
            "g-min" => fill!(g_min, parse_value(&key, value)?),
            "g-max" => fill!(g_max, parse_value(&key, value)?),
            "cutoffs" => fill!(
                cutoffs,
                value
                    .split(',')
                    .map(|c| parse_value(&key, c.trim()))
                    .collect::<Result<Vec<usize>, _>>()?
            ),
            "k" => fill!(k, parse_value(&key, value)?),
            "parity" => fill!(parity, parse_enum(&key, value)?),
            "guard" => fill!(guard, parse_value(&key, value)?),
            "ed-cutoff" => fill!(ed_cutoff, parse_value(&key, value)?),
            "output" => fill!(output, PathBuf::from(value)),
            "format" => fill!(format, parse_enum(&key, value)?),
            "seed" => fill!(seed, parse_value(&key, value)?),
            _ => return Err(CliError::Usage(format!("unknown config key `{key}`"))),
        }
    }
    Ok(())
}

pub fn resolve(command: Command, mut flags: Common) -> Result<RunConfig, CliError> {
    if let Some(path) = flags.config.clone() {
        let text = fs::read_to_string(&path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        apply_file(&mut flags, &text)?;
    }
    if flags.omega_q.is_some() && flags.lambda.is_some() {
        return Err(CliError::Usage("`omega-q` and `lambda` both set; give one".into()));
    }

    let omega = flags.omega.unwrap_or(1.0);
    let n = flags.n.unwrap_or(100);
    let g = flags.g.unwrap_or(0.2);
    // the exponent pipeline is defined at λ = 1
    let lambda = flags
        .lambda
        .or((command == Command::Exponents && flags.omega_q.is_none()).then_some(1.0));
    let omega_q = match lambda {
        Some(l) if l > 0.0 => omega / (2.0 * l * n as f64),
        Some(l) => return Err(CliError::Usage(format!("`lambda` must be positive, got {l}"))),
        None => flags.omega_q.unwrap_or(0.005),
    };
    let mut params = match flags.coupling.unwrap_or(Coupling::Two) {
        Coupling::Two => ModelParams::two_photon(omega, omega_q, g, n),
        Coupling::One => ModelParams::one_photon(omega, omega_q, g, n),
    };
    if let Some(g1) = flags.g1 {
        params = params.with_g1(g1);
    }
    let parity = match flags.parity {
        Some(Parity::Even) => ParitySector::Even,
        Some(Parity::Odd) => ParitySector::Odd,
        Some(Parity::Both) => ParitySector::Both,
        // the two-photon ground state lives in the even block
        None if params.coupling_order == CouplingOrder::TwoPhoton && params.g1.is_none_or(|g1| g1 == 0.0) => {
            ParitySector::Even
        }
        None => ParitySector::Both,
    };
    let format_explicit = flags.format.is_some() || flags.output.is_some();
    let format = flags.format.unwrap_or_else(|| {
        let csv = flags
            .output
            .as_ref()
            .and_then(|p| p.extension())
            .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        if csv {
            Format::Csv
        } else {
            Format::Json
        }
    });
    Ok(RunConfig {
        command,
        params,
        points: flags.points,
        g_min: flags.g_min,
        g_max: flags.g_max,
        cutoffs: flags.cutoffs.unwrap_or_else(|| vec![200]),
        k: flags.k,
        parity,
        fluctuations: FluctuationConfig { guard: flags.guard },
        ed_cutoff: flags.ed_cutoff,
        output: flags.output,
        format,
        format_explicit,
        seed: flags.seed,
    })
}
