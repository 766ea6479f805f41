//! Mean-field ground state.
//!
//! Spins are replaced by their Holstein-Primakoff mean value β (b = β + d,
//! fluctuations d dropped), leaving the field Hamiltonian
//! ω a†a + g_β (a² + a†²) + ω_q β² − ω_q N/2 with
//! g_β = (2g/N) β √(N − β²). Its squeezed-vacuum ground energy E_G(β) is
//! minimized over real β.

use serde::{Deserialize, Serialize};

use crate::bogoliubov::{bogoliubov_diagonalize, QuadraticBosonForm};
use crate::error::{DickeError, Result};
use crate::params::{derive, regime_classify, CouplingOrder, ModelParams, RegimeLabel};

/// Grid step of the brute-force scans, in units of √N.
pub const GRID_STEP: f64 = 1e-4;
/// Absolute tolerance of the golden-section polish on β.
pub const GOLDEN_TOL: f64 = 1e-10;
/// Width of the polish bracket around the closed-form minimizer, in units of √N.
pub const POLISH_BRACKET: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanFieldSolution {
    pub phase: RegimeLabel,
    /// Selected order parameter (first entry of `beta_branches`).
    pub beta: f64,
    /// {+β₀, −β₀} in the superradiant phase, {0} otherwise.
    pub beta_branches: Vec<f64>,
    /// Golden-section minimizer of E_G(β) bracketing the closed form; an
    /// independent check on `beta`.
    pub beta_polished: f64,
    pub g_beta: f64,
    pub r_a_mf: f64,
    pub e_ground: f64,
    pub jz_mean: f64,
    pub jx_mean: f64,
}

impl MeanFieldSolution {
    pub fn var_xa(&self) -> f64 {
        (-2.0 * self.r_a_mf).exp()
    }

    pub fn var_pa(&self) -> f64 {
        (2.0 * self.r_a_mf).exp()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearExtensionSolution {
    pub g1_beta: f64,
    pub g2_beta: f64,
    /// field displacement g₁^β/(ω + 2 g₂^β)
    pub alpha_disp: f64,
    /// ⟨a⟩, obtained from the Bogoliubov engine on the displaced field form
    pub a_mean: f64,
    /// ½ arctanh(2 g₂^β/ω)
    pub r_c: f64,
    pub e_ground_ext: f64,
    pub beta_selected: f64,
    /// Extended energy at ±|β_selected|.
    pub energy_plus: f64,
    pub energy_minus: f64,
    /// True when the ±β degeneracy is intact (g₁ = 0).
    pub degenerate: bool,
}

/// g_β = (g/N)(β + β*)√(N − β²) for real β.
pub fn effective_coupling(params: &ModelParams, beta: f64) -> f64 {
    let n = params.n();
    params.g / n * 2.0 * beta * (n - beta * beta).max(0.0).sqrt()
}

/// r_a = ½ arctanh(2 g_β/ω).
pub fn field_squeezing(params: &ModelParams, g_beta: f64) -> Result<f64> {
    let t = 2.0 * g_beta / params.omega;
    if !(t.abs() < 1.0) {
        return Err(DickeError::Domain(format!(
            "2|g_β|/ω = {} ≥ 1, squeezed field mode unstable",
            t.abs()
        )));
    }
    Ok(0.5 * t.atanh())
}

fn check_beta(params: &ModelParams, beta: f64) -> Result<()> {
    let n = params.n();
    if !(beta * beta <= n) {
        return Err(DickeError::Domain(format!(
            "|β| = {} exceeds √N = {}",
            beta.abs(),
            n.sqrt()
        )));
    }
    Ok(())
}

/// Mean-field ground energy
/// E_G(β) = cosh(2r)(ω² − 4g_β²)/(2ω) + ω_q β² − ω_q N/2 − ω/2.
pub fn energy_of_beta(params: &ModelParams, beta: f64) -> Result<f64> {
    check_beta(params, beta)?;
    let g_beta = effective_coupling(params, beta);
    let r = field_squeezing(params, g_beta)?;
    let w = params.omega;
    Ok(
        0.5 * (2.0 * r).cosh() / w * (w * w - 4.0 * g_beta * g_beta) + params.omega_q * beta * beta
            - params.omega_q * params.n() / 2.0
            - w / 2.0,
    )
}

/// Closed-form β₀ = √(N/2) (1 − √((1 − μ)/(4μ²λ² − μ)))^{1/2}, or `None`
/// when g ≤ g_t or the expression leaves its real domain.
pub fn analytic_beta0(params: &ModelParams) -> Option<f64> {
    let d = derive(params);
    if params.g <= d.g_t {
        return None;
    }
    let denom = 4.0 * d.mu * d.mu * d.lambda * d.lambda - d.mu;
    let y2 = (1.0 - d.mu) / denom;
    if !(denom > 0.0) || !(0.0..=1.0).contains(&y2) {
        return None;
    }
    Some((params.n() / 2.0 * (1.0 - y2.sqrt())).sqrt())
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
pub fn golden_section_min<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Uniform grid scan; returns the grid point of lowest value. Points where
/// `f` is NaN are skipped.
pub fn grid_min<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, step: f64) -> (f64, f64) {
    let steps = ((hi - lo) / step).round().max(1.0) as usize;
    let mut best = (lo, f64::INFINITY);
    for i in 0..=steps {
        let x = lo + (hi - lo) * i as f64 / steps as f64;
        let v = f(x);
        if v < best.1 {
            best = (x, v);
        }
    }
    best
}

fn energy_or_inf(params: &ModelParams, beta: f64) -> f64 {
    energy_of_beta(params, beta).unwrap_or(f64::INFINITY)
}

fn require_two_photon(params: &ModelParams) -> Result<()> {
    if params.coupling_order != CouplingOrder::TwoPhoton {
        return Err(DickeError::Domain(
            "mean-field analytics cover the two-photon coupling only".into(),
        ));
    }
    if params.g >= params.omega / 2.0 {
        return Err(DickeError::Collapse {
            g: params.g,
            half_omega: params.omega / 2.0,
        });
    }
    params.check()
}

/// Mean-field observables at a given β.
pub fn evaluate_at(params: &ModelParams, beta: f64) -> Result<MeanFieldSolution> {
    let n = params.n();
    let g_beta = effective_coupling(params, beta);
    Ok(MeanFieldSolution {
        phase: regime_classify(params),
        beta,
        beta_branches: vec![beta],
        beta_polished: beta,
        g_beta,
        r_a_mf: field_squeezing(params, g_beta)?,
        e_ground: energy_of_beta(params, beta)?,
        jz_mean: beta * beta - n / 2.0,
        jx_mean: beta * (n - beta * beta).max(0.0).sqrt(),
    })
}

/// Full-range brute-force minimizer of E_G(β): grid scan then golden-section
/// refinement around the best grid point.
pub fn brute_force_beta(params: &ModelParams) -> f64 {
    let root_n = params.n().sqrt();
    let step = GRID_STEP * root_n;
    let (b, _) = grid_min(|b| energy_or_inf(params, b), 0.0, root_n, step);
    let refined = golden_section_min(
        |x| energy_or_inf(params, x),
        (b - step).max(0.0),
        (b + step).min(root_n),
        GOLDEN_TOL,
    );
    // golden section never lands exactly on a boundary minimum
    let e0 = energy_or_inf(params, 0.0);
    if b == 0.0 && e0 <= energy_or_inf(params, refined) + 1e-14 * e0.abs() {
        0.0
    } else {
        refined
    }
}

pub fn minimize(params: &ModelParams) -> Result<MeanFieldSolution> {
    require_two_photon(params)?;
    let root_n = params.n().sqrt();
    let g_t = derive(params).g_t;
    if params.g < g_t {
        return evaluate_at(params, 0.0);
    }
    let (beta, polished) = match analytic_beta0(params).filter(|b| energy_of_beta(params, *b).is_ok()) {
        Some(b0) => {
            let half = 0.5 * POLISH_BRACKET * root_n;
            let polished = golden_section_min(
                |x| energy_or_inf(params, x),
                (b0 - half).max(0.0),
                (b0 + half).min(root_n),
                GOLDEN_TOL,
            );
            (b0, polished)
        }
        None => {
            let b = brute_force_beta(params);
            (b, b)
        }
    };
    let mut sol = evaluate_at(params, beta)?;
    sol.beta_polished = polished;
    if beta > 0.0 {
        sol.beta_branches = vec![beta, -beta];
    }
    Ok(sol)
}

/// Mean-field energy including the linear-coupling term,
/// E_G(β) − (g₁^β)²/(ω + 2 g₂^β).
pub fn extended_energy_of_beta(params: &ModelParams, beta: f64) -> Result<f64> {
    let base = energy_of_beta(params, beta)?;
    let g1 = params.g1.unwrap_or(0.0);
    let g1_beta = effective_coupling(&params.with_g(g1), beta);
    let g2_beta = effective_coupling(params, beta);
    Ok(base - g1_beta * g1_beta / (params.omega + 2.0 * g2_beta))
}

pub fn solve_linear_extension(params: &ModelParams) -> Result<LinearExtensionSolution> {
    require_two_photon(params)?;
    let g1 = params
        .g1
        .ok_or_else(|| DickeError::Domain("linear extension needs g1".into()))?;
    let root_n = params.n().sqrt();

    let (beta, degenerate) = if g1 == 0.0 {
        (minimize(params)?.beta, true)
    } else {
        let step = GRID_STEP * root_n;
        let (b, _) = grid_min(
            |b| extended_energy_of_beta(params, b).unwrap_or(f64::INFINITY),
            -root_n,
            root_n,
            step,
        );
        let b = golden_section_min(
            |x| extended_energy_of_beta(params, x).unwrap_or(f64::INFINITY),
            (b - step).max(-root_n),
            (b + step).min(root_n),
            GOLDEN_TOL,
        );
        (b, false)
    };

    let w = params.omega;
    let g1_beta = effective_coupling(&params.with_g(g1), beta);
    let g2_beta = effective_coupling(params, beta);
    let field = QuadraticBosonForm::from_pair_terms(
        params.omega_q * beta * beta - params.omega_q * params.n() / 2.0,
        w,
        g2_beta,
        g1_beta,
    );
    let bogo = bogoliubov_diagonalize(&field)?;

    Ok(LinearExtensionSolution {
        g1_beta,
        g2_beta,
        alpha_disp: g1_beta / (w + 2.0 * g2_beta),
        a_mean: bogo.displacement,
        r_c: field_squeezing(params, g2_beta)?,
        e_ground_ext: extended_energy_of_beta(params, beta)?,
        beta_selected: beta,
        energy_plus: extended_energy_of_beta(params, beta.abs())?,
        energy_minus: extended_energy_of_beta(params, -beta.abs())?,
        degenerate,
    })
}
