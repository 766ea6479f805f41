//! Gaussian fluctuations of the spin boson d (b = β + d) on top of the
//! mean-field state, after the high-frequency field sector has been
//! decoupled to second order in 1/√N and projected onto its lowest level.
//!
//! Both phases reduce to a [`QuadraticBosonForm`] in d, diagonalized by
//! [`bogoliubov_diagonalize`]. The closed-form excitation energies and
//! squeezing parameters are kept alongside as independent checks.
//!
//! Field and spin squeezing follow the crate-wide convention
//! var(X) = e^{−2r}.

use serde::{Deserialize, Serialize};

use crate::bogoliubov::{bogoliubov_diagonalize, QuadraticBosonForm};
use crate::error::{DickeError, Result};
use crate::meanfield::{self, MeanFieldSolution};
use crate::params::{default_guard, derive, regime_classify, CouplingOrder, ModelParams, RegimeLabel};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FluctuationConfig {
    /// Near-critical guard on |g − g_t|/g_t. `None` uses 0.1/N.
    pub guard: Option<f64>,
}

impl FluctuationConfig {
    pub fn guard_for(&self, params: &ModelParams) -> f64 {
        self.guard.unwrap_or_else(|| default_guard(params.n_qubits))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluctuationSolution {
    pub phase: RegimeLabel,
    pub r_s: f64,
    pub r_a: f64,
    pub e_exc: f64,
    pub e_ground: f64,
    pub var_xd: f64,
    pub var_pd: f64,
    pub var_xa: f64,
    pub var_pa: f64,
    /// O(1/√N) shift of β that absorbs the linear term (phase 2 only).
    pub beta_correction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinFluctuations {
    pub jx_mean: f64,
    pub jy_mean: f64,
    pub jz_mean: f64,
    pub var_jx: f64,
    pub var_jy: f64,
    pub var_jz: f64,
}

/// Coefficients of the phase-2 expansion in units of 2ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lambda2Coefficients {
    pub beta: f64,
    pub lambda0: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub lambda4: f64,
    /// d†d and (d + d†)² coefficients of V₁(d)
    pub v1_n: f64,
    pub v1_sq: f64,
    /// d†d and (d + d†)² coefficients of V₂(d)
    pub v2_n: f64,
    pub v2_sq: f64,
    /// ½ arctanh(4gαχ/ω + gα/(ωχN))
    pub r_a2: f64,
    /// r_a2 with the 1/N term of its argument dropped (equals r_a^MF)
    pub r_a2_leading: f64,
    /// β/√N
    pub alpha_hp: f64,
    /// √(1 − α²)
    pub chi: f64,
    /// 1 − β²/(N − β²)
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Phase2Effective {
    pub form: QuadraticBosonForm,
    pub beta_correction: f64,
}

fn require_model(params: &ModelParams) -> Result<()> {
    if params.coupling_order != CouplingOrder::TwoPhoton {
        return Err(DickeError::Domain(
            "fluctuation analytics cover the two-photon coupling only".into(),
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

/// First-phase effective Hamiltonian
/// −ω_q N/2 + ω_q d†d − (g²/Nω)(d + d†)².
pub fn phase1_effective(params: &ModelParams) -> Result<QuadraticBosonForm> {
    require_model(params)?;
    let g_t = derive(params).g_t;
    if params.g >= g_t {
        return Err(DickeError::Phase(format!(
            "g = {} ≥ g_t = {g_t}: not in the normal phase",
            params.g
        )));
    }
    let n = params.n();
    Ok(QuadraticBosonForm::new(
        -params.omega_q * n / 2.0,
        params.omega_q,
        -params.g * params.g / (n * params.omega),
        0.0,
    ))
}

/// ω_q √(1 − 4g²/(Nωω_q))
pub fn phase1_excitation_closed(params: &ModelParams) -> f64 {
    params.omega_q * phase1_stiffness(params).sqrt()
}

/// ¼ ln(1 − 4g²/(Nωω_q)), negative: P_d is the squeezed quadrature.
pub fn phase1_squeezing_closed(params: &ModelParams) -> f64 {
    0.25 * phase1_stiffness(params).ln()
}

/// −ω_q N/2 + (E_exc − ω_q)/2
pub fn phase1_ground_closed(params: &ModelParams) -> f64 {
    -params.omega_q * params.n() / 2.0 + 0.5 * (phase1_excitation_closed(params) - params.omega_q)
}

fn phase1_stiffness(params: &ModelParams) -> f64 {
    1.0 - 4.0 * params.g * params.g / (params.n() * params.omega * params.omega_q)
}

/// (P, Q) with A = ω_q P and A + 4B = ω_q Q in the second phase.
fn alpha_ratios(params: &ModelParams, beta: f64) -> (f64, f64) {
    let a2 = beta * beta / params.n();
    let mu4 = 16.0 * params.g * params.g / (params.omega * params.omega);
    let p = 1.0 + a2 / (1.0 - 2.0 * a2);
    let q = 1.0 + a2 / (1.0 - 2.0 * a2) * (3.0 + a2 / (1.0 - a2))
        - (1.0 - 2.0 * a2) / (1.0 - a2 - mu4 * a2 * (1.0 - a2) * (1.0 - a2));
    (p, q)
}

/// Closed-form second-phase excitation energy at mean-field β.
pub fn phase2_excitation_closed(params: &ModelParams, beta: f64) -> f64 {
    let (p, q) = alpha_ratios(params, beta);
    params.omega_q * (p * q).sqrt()
}

/// Closed-form second-phase spin squeezing, ¼ ln(Q/P) with
/// E_exc = ω_q √(P Q). Negative near g_t: X_d stays the amplified
/// quadrature across the transition.
pub fn phase2_squeezing_closed(params: &ModelParams, beta: f64) -> f64 {
    let (p, q) = alpha_ratios(params, beta);
    0.25 * (q / p).ln()
}

fn lambda2_at(params: &ModelParams, beta: f64, finite_n: bool) -> Result<Lambda2Coefficients> {
    require_model(params)?;
    let n = params.n();
    let (w, g) = (params.omega, params.g);
    let alpha = beta / n.sqrt();
    let chi = (1.0 - alpha * alpha).sqrt();
    let delta = 1.0 - beta * beta / (n - beta * beta);

    let leading_arg = 4.0 * g * alpha * chi / w;
    let arg = if finite_n {
        leading_arg + g * alpha / (w * chi * n)
    } else {
        leading_arg
    };
    if !(arg.abs() < 1.0) || !chi.is_finite() || chi == 0.0 {
        return Err(DickeError::Domain(format!("arctanh argument {arg} outside (−1, 1)")));
    }
    let r_a2 = 0.5 * arg.atanh();
    let (c2, s2) = ((2.0 * r_a2).cosh(), (2.0 * r_a2).sinh());

    let v_n = -g * alpha / (chi * w);
    let v_sq = -g / w * (alpha / (2.0 * chi) + alpha.powi(3) / (4.0 * chi.powi(3)));
    let lambda0 = c2 - arg * s2;
    if !(lambda0 > 0.0) {
        return Err(DickeError::Domain(format!("λ₀ = {lambda0} ≤ 0")));
    }

    Ok(Lambda2Coefficients {
        beta,
        lambda0,
        lambda1: params.omega_q * n * alpha / (2.0 * w),
        lambda2: g * chi * delta / w * c2,
        lambda3: -2.0 * s2 * g * chi * delta / w,
        lambda4: params.omega_q * n / (2.0 * w),
        v1_n: s2 * v_n,
        v1_sq: s2 * v_sq,
        v2_n: c2 * v_n,
        v2_sq: c2 * v_sq,
        r_a2,
        r_a2_leading: 0.5 * leading_arg.atanh(),
        alpha_hp: alpha,
        chi,
        delta,
    })
}

/// Phase-2 expansion coefficients at an arbitrary real β.
pub fn lambda2_at_beta(params: &ModelParams, beta: f64) -> Result<Lambda2Coefficients> {
    lambda2_at(params, beta, true)
}

pub fn phase2_coefficients(params: &ModelParams, solution: &MeanFieldSolution) -> Result<Lambda2Coefficients> {
    lambda2_at_beta(params, solution.beta)
}

impl Lambda2Coefficients {
    /// The same coefficients with the 1/N term of the Bogoliubov angle
    /// dropped.
    pub fn leading_order(&self, params: &ModelParams) -> Result<Self> {
        lambda2_at(params, self.beta, false)
    }
}

/// d-quadratic part of the projected second-phase Hamiltonian at β, in
/// energy units. These terms enter at O(1/N), so the leading-order angle
/// is exact to the kept order and the form exists for every β with
/// t = 2g_β/ω < 1. The linear coefficient is left at zero.
pub fn phase2_quadratic_form(params: &ModelParams, beta: f64) -> Result<QuadraticBosonForm> {
    let lead = lambda2_at(params, beta, false)?;
    let n = params.n();
    let w = params.omega;

    // K₀' → 1/4 in e^{-S} H₂ e^{S}, then H = 2ω H₂ − ω/2 − ω_q N/2 + ω_q β²
    let c_number = w * lead.lambda0 / 2.0 - w / 2.0 - params.omega_q * n / 2.0 + params.omega_q * beta * beta;
    let coeff_n = 2.0 * w / n * (lead.lambda4 - 0.5 * lead.v1_n);
    let coeff_sq = -w / n * (lead.v1_sq + lead.lambda2 * lead.lambda2 / lead.lambda0);
    Ok(QuadraticBosonForm::new(c_number, coeff_n, coeff_sq, 0.0))
}

/// Projected second-phase Hamiltonian: [`phase2_quadratic_form`] plus the
/// linear term λ₁/√N + λ₃/(4√N). That term vanishes at leading order and
/// comes from the 1/N part of the angle, so it needs `coeffs` with the
/// full angle; it is absorbed into a shift of β.
pub fn phase2_effective(params: &ModelParams, coeffs: &Lambda2Coefficients) -> Result<Phase2Effective> {
    let mut form = phase2_quadratic_form(params, coeffs.beta)?;
    form.coeff_lin = 2.0 * params.omega / params.n().sqrt() * (coeffs.lambda1 + coeffs.lambda3 / 4.0);
    let beta_correction = bogoliubov_diagonalize(&form)?.displacement;
    Ok(Phase2Effective { form, beta_correction })
}

pub fn solve_fluctuations(params: &ModelParams) -> Result<FluctuationSolution> {
    solve_fluctuations_with(params, &FluctuationConfig::default())
}

pub fn solve_fluctuations_with(params: &ModelParams, config: &FluctuationConfig) -> Result<FluctuationSolution> {
    require_model(params)?;
    let phase = regime_classify(params);
    let g_t = derive(params).g_t;
    let distance = (params.g - g_t).abs() / g_t;
    let guard = config.guard_for(params);
    if distance < guard {
        return Err(DickeError::Phase(format!(
            "|g − g_t|/g_t = {distance:e} inside the near-critical guard {guard:e}"
        )));
    }

    if params.g < g_t {
        let sol = bogoliubov_diagonalize(&phase1_effective(params)?)?;
        return Ok(FluctuationSolution {
            phase,
            r_s: sol.r,
            r_a: 0.0,
            e_exc: sol.e_exc,
            e_ground: sol.ground_energy,
            var_xd: sol.var_x(),
            var_pd: sol.var_p(),
            var_xa: 1.0,
            var_pa: 1.0,
            beta_correction: 0.0,
        });
    }

    let mf = meanfield::minimize(params)?;
    let coeffs = phase2_coefficients(params, &mf)?;
    let eff = phase2_effective(params, &coeffs)?;
    let sol = bogoliubov_diagonalize(&eff.form)?;
    Ok(FluctuationSolution {
        phase,
        r_s: sol.r,
        r_a: coeffs.r_a2,
        e_exc: sol.e_exc,
        e_ground: sol.ground_energy,
        var_xd: sol.var_x(),
        var_pd: sol.var_p(),
        var_xa: (-2.0 * coeffs.r_a2).exp(),
        var_pa: (2.0 * coeffs.r_a2).exp(),
        beta_correction: eff.beta_correction,
    })
}

/// Collective-spin means and variances from the linear HP map
/// J_x ≈ β√(N−β²) + (N−2β²)/(2√(N−β²)) X_d, J_y ≈ −(√(N−β²)/2) P_d,
/// J_z ≈ β² − N/2 + β X_d. Terms quadratic in d are dropped.
pub fn spin_fluctuations(params: &ModelParams, fl: &FluctuationSolution, mf: &MeanFieldSolution) -> SpinFluctuations {
    let n = params.n();
    let beta = if fl.phase == RegimeLabel::Superradiant {
        mf.beta
    } else {
        0.0
    };
    let rest = (n - beta * beta).max(0.0);
    let cx = (n - 2.0 * beta * beta) / (2.0 * rest.sqrt());
    SpinFluctuations {
        jx_mean: beta * rest.sqrt(),
        jy_mean: 0.0,
        jz_mean: beta * beta - n / 2.0,
        var_jx: cx * cx * fl.var_xd,
        var_jy: rest / 4.0 * fl.var_pd,
        var_jz: beta * beta * fl.var_xd,
    }
}
