//! Parameter scans over g, critical-exponent fits, and their output.

mod fit;
mod output;
mod table;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ed::{solve_lowest_with, BasisSpec, SolveOptions};
use crate::error::Result;
use crate::fluctuations::{solve_fluctuations_with, FluctuationConfig};
use crate::meanfield;
use crate::params::{derive, regime_classify, CouplingOrder, ModelParams, RegimeLabel};

pub use fit::{
    default_delta_grid, fit_exponent, fit_power_law, observable_value, ExponentFit, Observable, PowerLawFit, Side,
    EXPONENT_TOL, MIN_POINTS, MIN_R_SQUARED,
};
pub use output::{write_csv, write_json, CSV_COLUMNS, CSV_SCHEMA};
pub use table::{compare_table1, ed_crossover, reference_exponents, EdCrossover, Table1Comparison, Table1Row};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointStatus {
    Ok,
    /// inside the near-critical guard; fluctuation columns are empty
    GuardBand,
    Error,
}

impl PointStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PointStatus::Ok => "ok",
            PointStatus::GuardBand => "guard",
            PointStatus::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub g: f64,
    pub phase: RegimeLabel,
    pub status: PointStatus,
    pub beta: Option<f64>,
    pub e_exc_over_omega_q: Option<f64>,
    pub var_xd: Option<f64>,
    pub var_xa: Option<f64>,
    pub r_a: Option<f64>,
    pub r_s: Option<f64>,
    pub ed_photon_number: Option<f64>,
    pub message: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    /// parameters of the scan; `g` is overridden per point
    pub params: ModelParams,
    pub g_t: f64,
    pub guard: f64,
    pub code_version: String,
    /// Left empty by the library so repeated runs are byte-identical;
    /// callers may stamp it.
    pub created_at: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axis: Vec<f64>,
    pub records: Vec<SweepRecord>,
    pub metadata: SweepMetadata,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SweepConfig {
    pub fluctuations: FluctuationConfig,
    /// attach the ED ground-state photon number at every point
    pub ed: Option<(BasisSpec, SolveOptions)>,
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(a.ln(), b.ln(), n).into_iter().map(f64::exp).collect()
}

fn analytic_point(params: &ModelParams, config: &SweepConfig) -> SweepRecord {
    let phase = regime_classify(params);
    let mut rec = SweepRecord {
        g: params.g,
        phase,
        status: PointStatus::Ok,
        beta: None,
        e_exc_over_omega_q: None,
        var_xd: None,
        var_xa: None,
        r_a: None,
        r_s: None,
        ed_photon_number: None,
        message: None,
    };
    if params.coupling_order == CouplingOrder::OnePhoton {
        rec.status = PointStatus::Error;
        rec.message = Some("analytic columns cover the two-photon coupling only".into());
        return rec;
    }
    match meanfield::minimize(params) {
        Ok(mf) => rec.beta = Some(mf.beta),
        Err(e) => {
            rec.status = PointStatus::Error;
            rec.message = Some(e.to_string());
            return rec;
        }
    }
    let g_t = derive(params).g_t;
    if (params.g - g_t).abs() / g_t < config.fluctuations.guard_for(params) {
        rec.status = PointStatus::GuardBand;
        return rec;
    }
    match solve_fluctuations_with(params, &config.fluctuations) {
        Ok(fl) => {
            rec.e_exc_over_omega_q = Some(fl.e_exc / params.omega_q);
            rec.var_xd = Some(fl.var_xd);
            rec.var_xa = Some(fl.var_xa);
            rec.r_a = Some(fl.r_a);
            rec.r_s = Some(fl.r_s);
        }
        Err(e) => {
            rec.status = PointStatus::Error;
            rec.message = Some(e.to_string());
        }
    }
    rec
}

/// Evaluates every coupling in `g_grid` (in parallel, output in grid
/// order). Failures are recorded per point and never abort the scan.
pub fn sweep_g(params: &ModelParams, g_grid: &[f64], config: &SweepConfig) -> SweepResult {
    let records = g_grid
        .par_iter()
        .map(|&g| {
            let p = params.with_g(g);
            let mut rec = analytic_point(&p, config);
            if let Some((basis, opts)) = &config.ed {
                match solve_lowest_with(&p, basis, &opts.with_k(1)) {
                    Ok(r) => rec.ed_photon_number = Some(r.observables[0].photon_number),
                    Err(e) => {
                        rec.status = PointStatus::Error;
                        rec.message = Some(format!("ed: {e}"));
                    }
                }
            }
            rec
        })
        .collect();
    SweepResult {
        axis: g_grid.to_vec(),
        records,
        metadata: SweepMetadata {
            params: *params,
            g_t: derive(params).g_t,
            guard: config.fluctuations.guard_for(params),
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            created_at: None,
        },
    }
}

/// Convenience wrapper returning an error only for unusable parameters.
pub fn sweep_g_checked(params: &ModelParams, g_grid: &[f64], config: &SweepConfig) -> Result<SweepResult> {
    params.check()?;
    Ok(sweep_g(params, g_grid, config))
}
