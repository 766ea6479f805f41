//! Single-mode Bogoliubov engine.
//!
//! Every quadratic Hamiltonian in the crate is brought to the canonical form
//!
//! ```text
//! H = c + A d†d + B (d + d†)² + L (d + d†)
//! ```
//!
//! With X = d + d† and P = i(d† − d) ([X, P] = 2i) this is
//! ((A + 4B)/4) X² + (A/4) P² + L X + c − A/2, a displaced harmonic
//! oscillator of frequency E_exc = √(A (A + 4B)).
//!
//! Squeezing convention: the ground state has var(X) = e^{−2r} and
//! var(P) = e^{+2r}, vacuum being var = 1.

use serde::{Deserialize, Serialize};

use crate::error::{DickeError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticBosonForm {
    pub c_number: f64,
    /// coefficient of d†d
    pub coeff_n: f64,
    /// coefficient of (d + d†)²
    pub coeff_sq: f64,
    /// coefficient of (d + d†)
    pub coeff_lin: f64,
}

impl QuadraticBosonForm {
    pub fn new(c_number: f64, coeff_n: f64, coeff_sq: f64, coeff_lin: f64) -> Self {
        Self {
            c_number,
            coeff_n,
            coeff_sq,
            coeff_lin,
        }
    }

    /// Builds the canonical form from c + A d†d + B (d² + d†²) + L (d + d†),
    /// using d² + d†² = (d + d†)² − 2 d†d − 1.
    pub fn from_pair_terms(c_number: f64, number: f64, pair: f64, linear: f64) -> Self {
        Self {
            c_number: c_number - pair,
            coeff_n: number - 2.0 * pair,
            coeff_sq: pair,
            coeff_lin: linear,
        }
    }

    /// A (A + 4B)
    pub fn e_exc_squared(&self) -> f64 {
        self.coeff_n * (self.coeff_n + 4.0 * self.coeff_sq)
    }

    pub fn is_stable(&self) -> bool {
        self.coeff_n > 0.0 && self.coeff_n + 4.0 * self.coeff_sq > 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BogoliubovSolution {
    pub e_exc: f64,
    /// squeezing parameter, var(X) = e^{−2r} in the ground state
    pub r: f64,
    /// c + (E_exc − A)/2 − L²/(A + 4B)
    pub ground_energy: f64,
    /// ⟨d⟩ in the ground state, −L/(A + 4B)
    pub displacement: f64,
}

impl BogoliubovSolution {
    pub fn var_x(&self) -> f64 {
        (-2.0 * self.r).exp()
    }

    pub fn var_p(&self) -> f64 {
        (2.0 * self.r).exp()
    }
}

pub fn bogoliubov_diagonalize(form: &QuadraticBosonForm) -> Result<BogoliubovSolution> {
    let a = form.coeff_n;
    let stiff = a + 4.0 * form.coeff_sq;
    let e_exc_sq = a * stiff;
    if !form.is_stable() || !(e_exc_sq > 0.0) {
        return Err(DickeError::Instability { e_exc_sq });
    }
    let e_exc = e_exc_sq.sqrt();
    let displacement = -form.coeff_lin / stiff;
    Ok(BogoliubovSolution {
        e_exc,
        r: 0.25 * (stiff / a).ln(),
        ground_energy: form.c_number + 0.5 * (e_exc - a) - form.coeff_lin * form.coeff_lin / stiff,
        displacement,
    })
}
