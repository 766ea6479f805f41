//! Model parameters, derived dimensionless quantities and regime labels.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{DickeError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CouplingOrder {
    /// (g/N)(a + a†)(J_+ + J_-)
    OnePhoton,
    /// (g/N)(a² + a†²)(J_+ + J_-)
    TwoPhoton,
}

/// Physical inputs. Energies are in units with ħ = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub omega: f64,
    pub omega_q: f64,
    pub g: f64,
    pub n_qubits: usize,
    pub coupling_order: CouplingOrder,
    /// Optional linear coupling (g₁/N)(J_+ + J_-)(a + a†) added on top of
    /// the two-photon term. Absent for the pure model.
    #[serde(default)]
    pub g1: Option<f64>,
}

impl ModelParams {
    pub fn two_photon(omega: f64, omega_q: f64, g: f64, n_qubits: usize) -> Self {
        Self {
            omega,
            omega_q,
            g,
            n_qubits,
            coupling_order: CouplingOrder::TwoPhoton,
            g1: None,
        }
    }

    pub fn one_photon(omega: f64, omega_q: f64, g: f64, n_qubits: usize) -> Self {
        Self {
            coupling_order: CouplingOrder::OnePhoton,
            ..Self::two_photon(omega, omega_q, g, n_qubits)
        }
    }

    /// Two-photon parameters at fixed λ = ω/(2ω_q N).
    pub fn at_lambda(omega: f64, lambda: f64, g: f64, n_qubits: usize) -> Self {
        Self::two_photon(omega, omega / (2.0 * lambda * n_qubits as f64), g, n_qubits)
    }

    pub fn with_g(self, g: f64) -> Self {
        Self { g, ..self }
    }

    pub fn with_g1(self, g1: f64) -> Self {
        Self { g1: Some(g1), ..self }
    }

    pub fn n(&self) -> f64 {
        self.n_qubits as f64
    }

    /// Returns `Err` listing every violated invariant.
    pub fn check(&self) -> Result<()> {
        let report = validate(self);
        if report.is_valid() {
            Ok(())
        } else {
            Err(DickeError::InvalidParams(report.to_string()))
        }
    }
}

/// Relative distance (g − g_t)/g_t from the critical coupling.
pub fn relative_distance(params: &ModelParams) -> f64 {
    let g_t = derive(params).g_t;
    (params.g - g_t) / g_t
}

/// Default near-critical guard band: |g − g_t|/g_t below this value is
/// refused by the analytic fluctuation layer.
pub fn default_guard(n_qubits: usize) -> f64 {
    0.1 / n_qubits as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    /// ω/(2 ω_q N)
    pub lambda: f64,
    /// 4g²/ω²
    pub mu: f64,
    /// √(ω ω_q N)/2
    pub g_t: f64,
    /// ω/2
    pub g_collapse: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegimeLabel {
    Normal,
    Superradiant,
    Collapsed,
    NoSPTWindow,
}

impl fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegimeLabel::Normal => "Normal",
            RegimeLabel::Superradiant => "Superradiant",
            RegimeLabel::Collapsed => "Collapsed",
            RegimeLabel::NoSPTWindow => "NoSPTWindow",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            f.write_str("valid")
        } else {
            f.write_str(&self.violations.join("; "))
        }
    }
}

pub fn validate(params: &ModelParams) -> ValidationReport {
    let mut violations = Vec::new();
    let finite = [params.omega, params.omega_q, params.g]
        .into_iter()
        .chain(params.g1)
        .all(f64::is_finite);
    if !finite {
        violations.push("non-finite parameter".to_string());
    }
    if !(params.omega > 0.0) {
        violations.push("omega ≤ 0".to_string());
    }
    if !(params.omega_q > 0.0) {
        violations.push("omega_q ≤ 0".to_string());
    }
    if !(params.g >= 0.0) {
        violations.push("g < 0".to_string());
    }
    if params.n_qubits == 0 {
        violations.push("n_qubits = 0".to_string());
    }
    if params.coupling_order == CouplingOrder::TwoPhoton && params.g >= params.omega / 2.0 {
        violations.push("g ≥ ω/2: model unbounded".to_string());
    }
    ValidationReport { violations }
}

pub fn derive(params: &ModelParams) -> DerivedParams {
    let n = params.n();
    DerivedParams {
        lambda: params.omega / (2.0 * params.omega_q * n),
        mu: 4.0 * params.g * params.g / (params.omega * params.omega),
        g_t: (params.omega * params.omega_q * n).sqrt() / 2.0,
        g_collapse: params.omega / 2.0,
    }
}

/// Phase label for the two-photon model. The one-photon model has no
/// collapse, so it is only ever `Normal` or `Superradiant`; with the
/// (g/N) coupling convention its critical coupling is the same g_t.
pub fn regime_classify(params: &ModelParams) -> RegimeLabel {
    let d = derive(params);
    if params.coupling_order == CouplingOrder::TwoPhoton {
        if params.g >= d.g_collapse {
            return RegimeLabel::Collapsed;
        }
        if params.omega_q * params.n() >= params.omega {
            return RegimeLabel::NoSPTWindow;
        }
    }
    if params.g < d.g_t {
        RegimeLabel::Normal
    } else {
        RegimeLabel::Superradiant
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn running(g: f64) -> ModelParams {
        ModelParams::two_photon(1.0, 0.005, g, 100)
    }

    #[test]
    fn validate_examples() {
        assert!(validate(&running(0.3)).is_valid());

        let r = validate(&running(0.6));
        assert_eq!(r.violations, vec!["g ≥ ω/2: model unbounded"]);

        let r = validate(&ModelParams::two_photon(1.0, -0.1, 0.1, 10));
        assert_eq!(r.violations, vec!["omega_q ≤ 0"]);

        let r = validate(&ModelParams::two_photon(1.0, 0.1, 0.1, 0));
        assert_eq!(r.violations, vec!["n_qubits = 0"]);

        // the one-photon model has no collapse bound
        assert!(validate(&ModelParams::one_photon(1.0, 0.005, 0.6, 100)).is_valid());
        assert!(ModelParams::two_photon(f64::NAN, 0.1, 0.1, 2).check().is_err());
    }

    #[test]
    fn derive_running_example() {
        let d = derive(&running(0.45));
        assert!((d.lambda - 1.0).abs() < 1e-15);
        assert!((d.mu - 0.81).abs() < 1e-15);
        assert!((d.g_t - 0.125f64.sqrt()).abs() < 1e-15);
        assert!((d.g_t - 0.353553).abs() < 1e-6);
        assert_eq!(d.g_collapse, 0.5);

        assert_eq!(derive(&running(0.0)).mu, 0.0);

        // ω_q N = ω puts g_t on the collapse point
        let d = derive(&ModelParams::two_photon(1.0, 0.01, 0.1, 100));
        assert!((d.g_t - d.g_collapse).abs() < 1e-15);
    }

    #[test]
    fn g_t_matches_grid_switch() {
        // E_G(β) grid minimizer switches away from β = 0 at g_t
        let base = running(0.0);
        let g_t = derive(&base).g_t;
        let beta_min = |g: f64| {
            let p = base.with_g(g);
            let n = p.n();
            let steps = 20_000;
            (0..=steps)
                .map(|i| i as f64 * n.sqrt() / steps as f64)
                .map(|b| (b, grid_energy(&p, b)))
                .fold((0.0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc })
                .0
        };
        assert_eq!(beta_min(g_t * 0.999), 0.0);
        assert!(beta_min(g_t * 1.001) > 0.0);
    }

    // independent evaluation of the mean-field energy, β real
    fn grid_energy(p: &ModelParams, beta: f64) -> f64 {
        let n = p.n();
        let gb = 2.0 * p.g * beta * (n - beta * beta).sqrt() / n;
        let t = 2.0 * gb / p.omega;
        p.omega / 2.0 * (1.0 - t * t).sqrt() + p.omega_q * beta * beta - p.omega_q * n / 2.0 - p.omega / 2.0
    }

    #[test]
    fn regime_examples() {
        assert_eq!(regime_classify(&running(0.3)), RegimeLabel::Normal);
        assert_eq!(regime_classify(&running(0.45)), RegimeLabel::Superradiant);
        assert_eq!(
            regime_classify(&ModelParams::two_photon(1.0, 0.02, 0.45, 100)),
            RegimeLabel::NoSPTWindow
        );
        assert_eq!(regime_classify(&running(0.5)), RegimeLabel::Collapsed);
        assert_eq!(regime_classify(&running(0.7)), RegimeLabel::Collapsed);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn derive_is_scale_covariant(
                omega in 0.1f64..10.0,
                omega_q in 1e-4f64..0.1,
                g in 0.0f64..5.0,
                n in 1usize..500,
                c in 0.01f64..100.0,
            ) {
                let a = derive(&ModelParams::two_photon(omega, omega_q, g, n));
                let b = derive(&ModelParams::two_photon(c * omega, c * omega_q, c * g, n));
                prop_assert!((b.g_t - c * a.g_t).abs() <= 1e-12 * b.g_t.max(1e-300));
                prop_assert!((b.g_collapse - c * a.g_collapse).abs() <= 1e-12 * b.g_collapse);
                prop_assert!((b.lambda - a.lambda).abs() <= 1e-12 * a.lambda);
                prop_assert!((b.mu - a.mu).abs() <= 1e-12 * a.mu.max(1e-300));
                prop_assert!(a.lambda >= 0.0 && a.mu >= 0.0);
                prop_assert_eq!(a.g_t < a.g_collapse, omega_q * (n as f64) < omega);
            }

            #[test]
            fn classification_switches_at_g_t(
                omega in 0.5f64..2.0,
                n in 2usize..400,
                frac in 0.01f64..0.99,
                s in 0.001f64..0.999,
            ) {
                let omega_q = frac * omega / n as f64;
                let base = ModelParams::two_photon(omega, omega_q, 0.0, n);
                let d = derive(&base);
                prop_assert!(d.g_t < d.g_collapse);
                let eps = s * (d.g_collapse - d.g_t);
                prop_assert_eq!(regime_classify(&base.with_g(d.g_t - eps.min(d.g_t) * 0.999)), RegimeLabel::Normal);
                prop_assert_eq!(regime_classify(&base.with_g(d.g_t + eps)), RegimeLabel::Superradiant);
            }
        }
    }
}
