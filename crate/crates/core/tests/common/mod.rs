//! Independent oracles shared by the integration tests. Nothing here calls
//! into the code under test except for parameter types.

#![allow(dead_code)]

use dicke_core::{CouplingOrder, ModelParams};
use nalgebra::{DMatrix, SymmetricEigen};

/// Truncated annihilation operator on levels 0..=n_max.
pub fn lowering(n_max: usize) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(n_max + 1, n_max + 1);
    for n in 1..=n_max {
        a[(n - 1, n)] = (n as f64).sqrt();
    }
    a
}

/// c + A a†a + B (a + a†)² + L (a + a†) on a truncated Fock space.
pub fn fock_form(c: f64, a_n: f64, b_sq: f64, l_lin: f64, n_max: usize) -> DMatrix<f64> {
    let a = lowering(n_max);
    let x = &a + a.transpose();
    let num = a.transpose() * &a;
    DMatrix::identity(n_max + 1, n_max + 1) * c + num * a_n + &x * &x * b_sq + x * l_lin
}

/// Ascending eigenvalues and matching eigenvectors.
pub fn eig_sorted(m: DMatrix<f64>) -> (Vec<f64>, Vec<nalgebra::DVector<f64>>) {
    let e = SymmetricEigen::new(m);
    let mut idx: Vec<usize> = (0..e.eigenvalues.len()).collect();
    idx.sort_by(|&i, &j| e.eigenvalues[i].total_cmp(&e.eigenvalues[j]));
    (
        idx.iter().map(|&i| e.eigenvalues[i]).collect(),
        idx.iter().map(|&i| e.eigenvectors.column(i).into_owned()).collect(),
    )
}

/// Collective spin matrices (J_z, J_+) on |j, m⟩, m = −j..=j ascending.
pub fn spin_ops(n_qubits: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let d = n_qubits + 1;
    let j = n_qubits as f64 / 2.0;
    let mut jz = DMatrix::zeros(d, d);
    let mut jp = DMatrix::zeros(d, d);
    for k in 0..d {
        let m = k as f64 - j;
        jz[(k, k)] = m;
        if k + 1 < d {
            jp[(k + 1, k)] = (j * (j + 1.0) - m * (m + 1.0)).sqrt();
        }
    }
    (jz, jp)
}

/// Full-space Hamiltonian from Kronecker products, spin index major.
pub fn kron_hamiltonian(p: &ModelParams, n_max: usize) -> DMatrix<f64> {
    let (jz, jp) = spin_ops(p.n_qubits);
    let jpm = &jp + jp.transpose();
    let a = lowering(n_max);
    let ad = a.transpose();
    let is = DMatrix::<f64>::identity(p.n_qubits + 1, p.n_qubits + 1);
    let ib = DMatrix::<f64>::identity(n_max + 1, n_max + 1);
    let nf = p.n_qubits as f64;
    let photon = match p.coupling_order {
        CouplingOrder::TwoPhoton => &a * &a + &ad * &ad,
        CouplingOrder::OnePhoton => &a + &ad,
    };
    let mut h =
        is.kronecker(&(&ad * &a)) * p.omega + jz.kronecker(&ib) * p.omega_q + jpm.kronecker(&photon) * (p.g / nf);
    if let Some(g1) = p.g1 {
        h += jpm.kronecker(&(&a + &ad)) * (g1 / nf);
    }
    h
}
