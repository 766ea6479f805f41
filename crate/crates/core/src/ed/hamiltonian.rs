use rayon::prelude::*;

use super::basis::{BasisSpec, ParitySector};
use super::sparse::CsrMatrix;
use crate::error::{DickeError, Result};
use crate::params::{CouplingOrder, ModelParams};

/// Largest sector dimension assembled unless the caller raises it.
pub const DEFAULT_DIM_CAP: usize = 4_000_000;

/// √(j(j+1) − m(m±1)), the J_± ladder element from m.
fn spin_ladder(j: f64, m: f64, up: bool) -> f64 {
    let s = if up { 1.0 } else { -1.0 };
    (j * (j + 1.0) - m * (m + s)).max(0.0).sqrt()
}

/// Checks that the requested parity block is invariant under `params`.
fn check_parity(params: &ModelParams, basis: &BasisSpec) -> Result<()> {
    let breaks_parity = params.coupling_order == CouplingOrder::OnePhoton || params.g1.is_some_and(|g1| g1 != 0.0);
    if breaks_parity && basis.parity != ParitySector::Both {
        return Err(DickeError::Domain(
            "photon parity is not conserved by this coupling; use ParitySector::Both".into(),
        ));
    }
    Ok(())
}

fn check_numbers(params: &ModelParams) -> Result<()> {
    let finite = [params.omega, params.omega_q, params.g, params.g1.unwrap_or(0.0)]
        .iter()
        .all(|x| x.is_finite());
    if !finite || params.omega <= 0.0 || params.omega_q <= 0.0 || params.g < 0.0 || params.n_qubits == 0 {
        return Err(DickeError::InvalidParams(format!("{params:?}")));
    }
    Ok(())
}

/// All matrix elements ⟨k|H|i⟩ for basis state i, as (k, value).
fn row_entries(params: &ModelParams, basis: &BasisSpec, i: usize) -> Vec<(usize, f64)> {
    let (mi, n) = basis.state(i);
    let j = basis.j();
    let m = basis.m_of(mi);
    let nf = n as f64;
    let inv_n = 1.0 / params.n_qubits as f64;
    let mut out = Vec::with_capacity(9);
    out.push((i, params.omega * nf + params.omega_q * m));

    // spin moves m → m ± 1
    let mut spin_moves = Vec::with_capacity(2);
    if mi < basis.n_qubits {
        spin_moves.push((mi + 1, spin_ladder(j, m, true)));
    }
    if mi > 0 {
        spin_moves.push((mi - 1, spin_ladder(j, m, false)));
    }

    // photon moves n → n', amplitude, coupling
    let mut photon_moves: Vec<(usize, f64, f64)> = Vec::with_capacity(4);
    let (g_main, step) = match params.coupling_order {
        CouplingOrder::TwoPhoton => (params.g, 2),
        CouplingOrder::OnePhoton => (params.g, 1),
    };
    let mut push_ladder = |step: usize, coupling: f64| {
        if coupling == 0.0 {
            return;
        }
        if n >= step {
            let amp: f64 = (0..step).map(|s| (n - s) as f64).product::<f64>().sqrt();
            photon_moves.push((n - step, amp, coupling));
        }
        if n + step <= basis.fock_cutoff {
            let amp: f64 = (1..=step).map(|s| (n + s) as f64).product::<f64>().sqrt();
            photon_moves.push((n + step, amp, coupling));
        }
    };
    push_ladder(step, g_main * inv_n);
    if params.coupling_order == CouplingOrder::TwoPhoton {
        push_ladder(1, params.g1.unwrap_or(0.0) * inv_n);
    }

    for &(mk, s_amp) in &spin_moves {
        for &(nk, p_amp, coupling) in &photon_moves {
            if let Some(k) = basis.index(mk, nk) {
                out.push((k, coupling * s_amp * p_amp));
            }
        }
    }
    out
}

/// Sparse Hamiltonian of the sector, refusing dimensions above
/// [`DEFAULT_DIM_CAP`].
pub fn build_hamiltonian(params: &ModelParams, basis: &BasisSpec) -> Result<CsrMatrix> {
    build_hamiltonian_capped(params, basis, DEFAULT_DIM_CAP)
}

/// As [`build_hamiltonian`] with an explicit cap. Couplings at or above
/// the collapse point are accepted on purpose: the truncated matrix stays
/// finite and its cutoff dependence is what the collapse probe measures.
pub fn build_hamiltonian_capped(params: &ModelParams, basis: &BasisSpec, cap: usize) -> Result<CsrMatrix> {
    check_numbers(params)?;
    if basis.n_qubits != params.n_qubits {
        return Err(DickeError::InvalidParams(format!(
            "basis has N = {} but params have N = {}",
            basis.n_qubits, params.n_qubits
        )));
    }
    check_parity(params, basis)?;
    let dim = basis.dim();
    if dim > cap {
        return Err(DickeError::Dimension { dim, cap });
    }
    if dim == 0 {
        return Err(DickeError::InvalidParams("empty basis".into()));
    }
    let rows: Vec<_> = (0..dim)
        .into_par_iter()
        .map(|i| row_entries(params, basis, i))
        .collect();
    Ok(CsrMatrix::from_rows(rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_when_uncoupled() {
        let p = ModelParams::two_photon(1.0, 0.3, 0.0, 2);
        let b = BasisSpec::new(2, 3, ParitySector::Both);
        let h = build_hamiltonian(&p, &b).unwrap();
        // the |m = 0, n = 0⟩ diagonal is exactly zero and not stored
        assert_eq!(h.nnz(), b.dim() - 1);
        // |m = −1, n = 0⟩ is the lowest state
        assert!((h.get(0, 0) + 0.3).abs() < 1e-15);
        assert!((h.get(b.full_index(2, 3), b.full_index(2, 3)) - 3.3).abs() < 1e-15);
    }

    #[test]
    fn two_photon_element() {
        // ⟨m=0, n=2| (g/N) J_+ a†² |m=−1, n=0⟩ = (g/2)·√2·√2
        let p = ModelParams::two_photon(1.0, 0.1, 0.4, 2);
        let b = BasisSpec::new(2, 4, ParitySector::Both);
        let h = build_hamiltonian(&p, &b).unwrap();
        let from = b.index(0, 0).unwrap();
        let to = b.index(1, 2).unwrap();
        assert!((h.get(to, from) - 0.2 * 2.0).abs() < 1e-14);
        assert_eq!(h.max_asymmetry(), 0.0);
        assert_eq!(h.get(b.index(1, 1).unwrap(), from), 0.0);
    }

    #[test]
    fn parity_checks() {
        let b = BasisSpec::new(2, 4, ParitySector::Even);
        let one = ModelParams::one_photon(1.0, 0.1, 0.2, 2);
        assert!(matches!(build_hamiltonian(&one, &b), Err(DickeError::Domain(_))));
        let ext = ModelParams::two_photon(1.0, 0.1, 0.2, 2).with_g1(0.1);
        assert!(build_hamiltonian(&ext, &b).is_err());
        assert!(build_hamiltonian(&ext, &b.with_parity(ParitySector::Both)).is_ok());
    }

    #[test]
    fn dimension_cap() {
        let p = ModelParams::two_photon(1.0, 0.1, 0.2, 10);
        let b = BasisSpec::new(10, 99, ParitySector::Both);
        assert!(matches!(
            build_hamiltonian_capped(&p, &b, 1000),
            Err(DickeError::Dimension { dim: 1100, cap: 1000 })
        ));
    }

    #[test]
    fn collapse_point_still_assembles() {
        let p = ModelParams::two_photon(1.0, 0.1, 0.6, 4);
        let b = BasisSpec::new(4, 20, ParitySector::Even);
        assert!(build_hamiltonian(&p, &b).is_ok());
    }
}
