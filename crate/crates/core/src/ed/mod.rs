//! Exact diagonalization in the truncated Dicke ⊗ Fock space.
//!
//! This is the independent oracle for the analytic modules: it knows
//! nothing about mean fields or Bogoliubov transforms.

mod banded;
mod basis;
mod hamiltonian;
pub mod lanczos;
mod solve;
mod sparse;

pub use basis::{BasisSpec, ParitySector};
pub use hamiltonian::{build_hamiltonian, build_hamiltonian_capped, DEFAULT_DIM_CAP};
pub use solve::{
    collapse_probe, convergence_scan, curvature_peak, observables_of, photon_number_scan, solve_lowest,
    solve_lowest_with, symmetry_broken_pair, CollapsePoint, CollapseReport, CutoffPoint, EDResult, SolveOptions,
    SolverChoice, SolverKind, StateObservables, SymmetryBrokenPair, CONVERGENCE_TOL,
};
pub use sparse::CsrMatrix;
