use thiserror::Error;

pub type Result<T> = std::result::Result<T, DickeError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DickeError {
    /// Parameters violate a basic invariant (see [`crate::params::validate`]).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// An argument is outside the domain of a formula, e.g. the arctanh
    /// argument of a squeezing parameter reached 1.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("spectral collapse: g = {g} ≥ ω/2 = {half_omega}, the two-photon model is unbounded")]
    Collapse { g: f64, half_omega: f64 },

    /// The requested effective Hamiltonian does not apply at these parameters.
    #[error("phase error: {0}")]
    Phase(String),

    /// Quadratic form with E_exc² ≤ 0.
    #[error("unstable quadratic form: E_exc² = {e_exc_sq}")]
    Instability { e_exc_sq: f64 },

    #[error("Hilbert dimension {dim} exceeds cap {cap}")]
    Dimension { dim: usize, cap: usize },

    #[error("eigensolver did not converge after {iterations} iterations (max residual {max_residual:e})")]
    Convergence { iterations: usize, max_residual: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}
