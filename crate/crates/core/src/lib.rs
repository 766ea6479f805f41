//! Two-photon Dicke model laboratory.
//!
//! The model is
//!
//! ```text
//! H = ω a†a + ω_q J_z + (g/N)(J_+ + J_-)(a² + a†²)
//! ```
//!
//! restricted to the maximal angular-momentum sector j = N/2. The crate
//! computes the mean-field phase diagram ([`meanfield`]), the Gaussian
//! fluctuation spectrum on top of it ([`fluctuations`]), and an independent
//! finite-N exact-diagonalization oracle ([`ed`]). [`sweep`] strings these
//! together into parameter scans and critical-exponent fits.
//!
//! All energies are in units with ħ = 1.

// `!(x < y)` is used on purpose so that NaN fails domain checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bogoliubov;
pub mod ed;
pub mod error;
pub mod fluctuations;
pub mod meanfield;
pub mod params;
pub mod sweep;

pub use bogoliubov::{bogoliubov_diagonalize, BogoliubovSolution, QuadraticBosonForm};
pub use ed::{BasisSpec, EDResult, ParitySector};
pub use error::{DickeError, Result};
pub use fluctuations::{FluctuationSolution, Lambda2Coefficients, SpinFluctuations};
pub use meanfield::{LinearExtensionSolution, MeanFieldSolution};
pub use params::{CouplingOrder, DerivedParams, ModelParams, RegimeLabel, ValidationReport};
pub use sweep::{ExponentFit, Observable, Side, SweepResult};
