use serde::{Deserialize, Serialize};

use super::logspace;
use crate::error::{DickeError, Result};
use crate::fluctuations::{solve_fluctuations_with, FluctuationConfig, FluctuationSolution};
use crate::params::{derive, ModelParams};

pub const MIN_POINTS: usize = 8;
pub const MIN_R_SQUARED: f64 = 0.999;
/// allowed |γ_fit − γ_ref|
pub const EXPONENT_TOL: f64 = 0.02;

/// Quantities whose critical scaling is fitted. The variance entries are
/// fitted as standard deviations, ΔX = √var(X).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Observable {
    Eexc,
    VarXd,
    VarXa,
}

impl Observable {
    pub const ALL: [Observable; 3] = [Observable::Eexc, Observable::VarXd, Observable::VarXa];

    pub fn name(self) -> &'static str {
        match self {
            Observable::Eexc => "E_exc/omega_q",
            Observable::VarXd => "dX_d",
            Observable::VarXa => "dX_a",
        }
    }
}

/// Side of the transition: g = g_t(1 − δ) or g = g_t(1 + δ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Below,
    Above,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub gamma: f64,
    pub prefactor: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

/// Least squares of log|y| on log x. Needs `MIN_POINTS` usable points.
/// A flat series (γ = 0 exactly) has no variance to explain; it is given
/// r² = 1 when the residuals vanish too.
pub fn fit_power_law(x: &[f64], y: &[f64]) -> Result<PowerLawFit> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && b.is_finite() && **b != 0.0 && a.is_finite())
        .map(|(a, b)| (a.ln(), b.abs().ln()))
        .collect();
    if pts.len() < MIN_POINTS {
        return Err(DickeError::InsufficientData(format!(
            "{} usable points, need {MIN_POINTS}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(DickeError::InsufficientData("all abscissae coincide".into()));
    }
    let gamma = sxy / sxx;
    let icept = my - gamma * mx;
    let ss_res: f64 = pts.iter().map(|p| (p.1 - icept - gamma * p.0).powi(2)).sum();
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let scale = pts.iter().map(|p| p.1 * p.1).sum::<f64>().max(1.0);
    let r_squared = if ss_tot <= 1e-24 * scale {
        if ss_res <= 1e-24 * scale {
            1.0
        } else {
            0.0
        }
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok(PowerLawFit {
        gamma,
        prefactor: icept.exp(),
        r_squared,
        n_points: pts.len(),
    })
}

pub fn observable_value(params: &ModelParams, fl: &FluctuationSolution, obs: Observable) -> f64 {
    match obs {
        Observable::Eexc => fl.e_exc / params.omega_q,
        Observable::VarXd => fl.var_xd.sqrt(),
        Observable::VarXa => fl.var_xa.sqrt(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub observable: Observable,
    pub side: Side,
    pub gamma: f64,
    pub prefactor: f64,
    pub r_squared: f64,
    pub n_points: usize,
    pub delta_min: f64,
    pub delta_max: f64,
    pub reference: Option<f64>,
    pub tolerance: f64,
}

impl ExponentFit {
    pub fn quality_ok(&self) -> bool {
        self.n_points >= MIN_POINTS && self.r_squared >= MIN_R_SQUARED
    }

    /// Good fit and within tolerance of the reference (if any).
    pub fn passes(&self) -> bool {
        self.quality_ok() && self.reference.is_none_or(|r| (self.gamma - r).abs() <= self.tolerance)
    }
}

/// 16 log-spaced relative distances in [1e-3, 1e-1], starting just
/// outside the guard band when the guard is wider.
pub fn default_delta_grid(params: &ModelParams, config: &FluctuationConfig) -> Vec<f64> {
    let lo = (1.05 * config.guard_for(params)).max(1e-3);
    logspace(lo, 1e-1, 16)
}

/// Fits |O(δ)| ∝ δ^γ on `deltas`, with g = g_t(1 ∓ δ).
pub fn fit_exponent(
    params: &ModelParams,
    obs: Observable,
    side: Side,
    deltas: &[f64],
    config: &FluctuationConfig,
    reference: Option<f64>,
) -> Result<ExponentFit> {
    let g_t = derive(params).g_t;
    let mut xs = Vec::with_capacity(deltas.len());
    let mut ys = Vec::with_capacity(deltas.len());
    for &d in deltas {
        let g = match side {
            Side::Below => g_t * (1.0 - d),
            Side::Above => g_t * (1.0 + d),
        };
        if let Ok(fl) = solve_fluctuations_with(&params.with_g(g), config) {
            xs.push(d);
            ys.push(observable_value(params, &fl, obs));
        }
    }
    let fit = fit_power_law(&xs, &ys)?;
    Ok(ExponentFit {
        observable: obs,
        side,
        gamma: fit.gamma,
        prefactor: fit.prefactor,
        r_squared: fit.r_squared,
        n_points: fit.n_points,
        delta_min: xs.iter().copied().fold(f64::INFINITY, f64::min),
        delta_max: xs.iter().copied().fold(0.0, f64::max),
        reference,
        tolerance: EXPONENT_TOL,
    })
}
