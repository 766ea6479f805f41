use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::banded::{half_bandwidth, BandedCholesky};
use super::basis::{BasisSpec, ParitySector};
use super::hamiltonian::{build_hamiltonian_capped, DEFAULT_DIM_CAP};
use super::lanczos::{dense_lowest, lowest_eigenpairs, ritz_upper_bound, Eigenpairs, LanczosOptions};
use super::sparse::CsrMatrix;
use crate::error::{DickeError, Result};
use crate::params::{CouplingOrder, ModelParams};

/// Relative ground-energy change between the two largest cutoffs below
/// which a cutoff scan counts as converged.
pub const CONVERGENCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolverChoice {
    /// dense up to `dense_threshold`, then shift-invert while the banded
    /// factor fits in `band_storage_cap` words, then plain Lanczos
    Auto,
    Dense,
    /// matrix-free thick-restart Lanczos on H
    Lanczos,
    /// Lanczos on (H − σ)⁻¹ with σ just below the spectrum
    ShiftInvert,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolverKind {
    Dense,
    Lanczos,
    ShiftInvert,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// number of lowest states
    pub k: usize,
    pub solver: SolverChoice,
    pub dense_threshold: usize,
    pub lanczos: LanczosOptions,
    pub dim_cap: usize,
    pub band_storage_cap: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            k: 6,
            solver: SolverChoice::Auto,
            dense_threshold: 400,
            lanczos: LanczosOptions::default(),
            dim_cap: DEFAULT_DIM_CAP,
            band_storage_cap: 60_000_000,
        }
    }
}

impl SolveOptions {
    pub fn with_k(self, k: usize) -> Self {
        Self { k, ..self }
    }

    pub fn with_solver(self, solver: SolverChoice) -> Self {
        Self { solver, ..self }
    }
}

/// Expectation values in one eigenstate. Quadratures are X = a + a† and
/// P = i(a† − a), so the vacuum has var = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateObservables {
    pub photon_number: f64,
    pub jz: f64,
    pub jx: f64,
    pub var_xa: f64,
    pub var_pa: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffPoint {
    pub cutoff: usize,
    pub ground_energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EDResult {
    pub params: ModelParams,
    pub basis: BasisSpec,
    /// ascending
    pub eigenvalues: Vec<f64>,
    /// parity block each state was found in
    pub sectors: Vec<ParitySector>,
    pub observables: Vec<StateObservables>,
    pub residuals: Vec<f64>,
    pub solver: SolverKind,
    pub cutoff_used: usize,
    /// Set by [`convergence_scan`]; a single solve makes no cutoff claim
    /// and reports `false`.
    pub converged: bool,
    pub convergence_history: Vec<CutoffPoint>,
    /// eigenvectors in the full (both-parity) basis ordering
    #[serde(skip)]
    pub states: Vec<Vec<f64>>,
}

impl EDResult {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Mean level spacing (E_{k−1} − E_0)/(k − 1).
    pub fn mean_spacing(&self) -> Option<f64> {
        let k = self.eigenvalues.len();
        (k >= 2).then(|| (self.eigenvalues[k - 1] - self.eigenvalues[0]) / (k as f64 - 1.0))
    }

    /// Ground energy never rises as the cutoff grows (up to `slack`
    /// relative). Truncation is a variational restriction.
    pub fn variationally_monotone(&self, slack: f64) -> bool {
        self.convergence_history
            .windows(2)
            .all(|w| w[1].ground_energy <= w[0].ground_energy + slack * w[0].ground_energy.abs().max(1.0))
    }

    /// Relative change of the ground energy between the last two cutoffs.
    pub fn last_relative_change(&self) -> Option<f64> {
        let h = &self.convergence_history;
        (h.len() >= 2).then(|| {
            let (a, b) = (h[h.len() - 2].ground_energy, h[h.len() - 1].ground_energy);
            (b - a).abs() / b.abs().max(f64::MIN_POSITIVE)
        })
    }
}

fn embed(basis: &BasisSpec, v: &[f64]) -> Vec<f64> {
    let mut full = vec![0.0; basis.full_dim()];
    for (i, &c) in v.iter().enumerate() {
        let (m, n) = basis.state(i);
        full[basis.full_index(m, n)] = c;
    }
    full
}

fn ladder_up(j: f64, m: f64) -> f64 {
    (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

/// ⟨u| J_x |v⟩ for full-basis vectors.
fn jx_element(basis: &BasisSpec, u: &[f64], v: &[f64]) -> f64 {
    let levels = basis.fock_cutoff + 1;
    let j = basis.j();
    let mut acc = 0.0;
    for mi in 0..basis.n_qubits {
        let amp = ladder_up(j, basis.m_of(mi));
        for n in 0..levels {
            let lo = basis.full_index(mi, n);
            let hi = basis.full_index(mi + 1, n);
            acc += amp * (u[hi] * v[lo] + u[lo] * v[hi]);
        }
    }
    0.5 * acc
}

/// Observables of a normalized full-basis state.
pub fn observables_of(basis: &BasisSpec, v: &[f64]) -> StateObservables {
    let levels = basis.fock_cutoff + 1;
    let mut n_mean = 0.0;
    let mut jz = 0.0;
    let mut x_mean = 0.0;
    let mut pair = 0.0;
    for mi in 0..=basis.n_qubits {
        let m = basis.m_of(mi);
        for n in 0..levels {
            let c = v[basis.full_index(mi, n)];
            if c == 0.0 {
                continue;
            }
            let p = c * c;
            n_mean += p * n as f64;
            jz += p * m;
            if n + 1 < levels {
                x_mean += 2.0 * c * v[basis.full_index(mi, n + 1)] * ((n + 1) as f64).sqrt();
            }
            if n + 2 < levels {
                // ⟨a² + a†²⟩ for a real vector
                pair += 2.0 * c * v[basis.full_index(mi, n + 2)] * (((n + 1) * (n + 2)) as f64).sqrt();
            }
        }
    }
    StateObservables {
        photon_number: n_mean,
        jz,
        jx: jx_element(basis, v, v),
        var_xa: pair + 2.0 * n_mean + 1.0 - x_mean * x_mean,
        var_pa: -pair + 2.0 * n_mean + 1.0,
    }
}

/// Lowest eigenpairs through (H − σ)⁻¹. σ starts just below a Ritz upper
/// bound on E₀ and moves down until H − σ factors. `None` if no shift
/// was found.
fn shift_invert(h: &CsrMatrix, band: usize, opts: &SolveOptions) -> Result<Option<Eigenpairs>> {
    let upper = ritz_upper_bound(|x, y| h.matvec(x, y), h.dim, 40, opts.lanczos.seed);
    let mut delta = 1e-4 * upper.abs().max(1.0);
    let mut factor = None;
    for _ in 0..60 {
        if let Some(f) = BandedCholesky::factor(h, band, upper - delta) {
            factor = Some(f);
            break;
        }
        delta *= 4.0;
    }
    let Some(factor) = factor else { return Ok(None) };
    // the lowest E maps to the lowest ν = −1/(E − σ)
    let inner = LanczosOptions {
        tol: 1e-13,
        ..opts.lanczos
    };
    let inv = lowest_eigenpairs(
        |x, y| {
            y.copy_from_slice(x);
            factor.solve(y);
            y.iter_mut().for_each(|v| *v = -*v);
        },
        h.dim,
        opts.k,
        inner,
    )?;
    let mut out = Eigenpairs {
        values: Vec::new(),
        vectors: Vec::new(),
        residuals: Vec::new(),
        matvecs: inv.matvecs,
    };
    let mut hv = vec![0.0; h.dim];
    for v in inv.vectors {
        h.matvec(&v, &mut hv);
        let theta: f64 = v.iter().zip(&hv).map(|(a, b)| a * b).sum();
        let r = hv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - theta * b).powi(2))
            .sum::<f64>()
            .sqrt();
        out.values.push(theta);
        out.residuals.push(r);
        out.vectors.push(v);
    }
    let worst = out
        .residuals
        .iter()
        .zip(&out.values)
        .map(|(r, v)| r / v.abs().max(1.0))
        .fold(0.0, f64::max);
    if worst > 10.0 * opts.lanczos.tol {
        return Err(DickeError::Convergence {
            iterations: out.matvecs,
            max_residual: worst,
        });
    }
    Ok(Some(out))
}

fn solve_sector(params: &ModelParams, basis: &BasisSpec, opts: &SolveOptions) -> Result<(Eigenpairs, SolverKind)> {
    let h = build_hamiltonian_capped(params, basis, opts.dim_cap)?;
    let band = half_bandwidth(&h);
    let kind = match opts.solver {
        SolverChoice::Dense => SolverKind::Dense,
        SolverChoice::Lanczos => SolverKind::Lanczos,
        SolverChoice::ShiftInvert => SolverKind::ShiftInvert,
        SolverChoice::Auto if h.dim <= opts.dense_threshold => SolverKind::Dense,
        SolverChoice::Auto if BandedCholesky::storage(h.dim, band) <= opts.band_storage_cap => SolverKind::ShiftInvert,
        SolverChoice::Auto => SolverKind::Lanczos,
    };
    match kind {
        SolverKind::Dense => Ok((dense_lowest(h.to_dense(), opts.k), SolverKind::Dense)),
        SolverKind::ShiftInvert => match shift_invert(&h, band, opts)? {
            Some(pairs) => Ok((pairs, SolverKind::ShiftInvert)),
            None => Ok((
                lowest_eigenpairs(|x, y| h.matvec(x, y), h.dim, opts.k, opts.lanczos)?,
                SolverKind::Lanczos,
            )),
        },
        SolverKind::Lanczos => Ok((
            lowest_eigenpairs(|x, y| h.matvec(x, y), h.dim, opts.k, opts.lanczos)?,
            SolverKind::Lanczos,
        )),
    }
}

pub fn solve_lowest(params: &ModelParams, basis: &BasisSpec, k: usize) -> Result<EDResult> {
    solve_lowest_with(params, basis, &SolveOptions::default().with_k(k))
}

/// Lowest `opts.k` eigenpairs. For the pure two-photon model with
/// `ParitySector::Both`, the two parity blocks are solved separately and
/// merged.
pub fn solve_lowest_with(params: &ModelParams, basis: &BasisSpec, opts: &SolveOptions) -> Result<EDResult> {
    if opts.k == 0 {
        return Err(DickeError::InvalidParams("k = 0".into()));
    }
    let split = basis.parity == ParitySector::Both
        && params.coupling_order == CouplingOrder::TwoPhoton
        && params.g1.is_none_or(|g1| g1 == 0.0);
    let sectors: Vec<BasisSpec> = if split {
        [ParitySector::Even, ParitySector::Odd]
            .into_iter()
            .map(|p| basis.with_parity(p))
            .filter(|b| b.dim() > 0)
            .collect()
    } else {
        vec![*basis]
    };

    let mut found: Vec<(f64, f64, Vec<f64>, ParitySector)> = Vec::new();
    let mut kind = SolverKind::Dense;
    for sector in &sectors {
        let (pairs, k) = solve_sector(params, sector, opts)?;
        if k != SolverKind::Dense {
            kind = k;
        }
        for ((e, v), r) in pairs.values.into_iter().zip(pairs.vectors).zip(pairs.residuals) {
            found.push((e, r, embed(sector, &v), sector.parity));
        }
    }
    found.sort_by(|a, b| a.0.total_cmp(&b.0));
    found.truncate(opts.k);

    let full = basis.with_parity(ParitySector::Both);
    let observables = found.par_iter().map(|(_, _, v, _)| observables_of(&full, v)).collect();
    Ok(EDResult {
        params: *params,
        basis: *basis,
        eigenvalues: found.iter().map(|f| f.0).collect(),
        residuals: found.iter().map(|f| f.1).collect(),
        sectors: found.iter().map(|f| f.3).collect(),
        observables,
        solver: kind,
        cutoff_used: basis.fock_cutoff,
        converged: false,
        convergence_history: Vec::new(),
        states: found.into_iter().map(|f| f.2).collect(),
    })
}

/// Solves at each cutoff in ascending order and reports the last one,
/// with `converged` set when the ground energy moved by less than `tol`
/// (relative) between the two largest cutoffs.
pub fn convergence_scan(
    params: &ModelParams,
    basis: &BasisSpec,
    cutoffs: &[usize],
    opts: &SolveOptions,
    tol: f64,
) -> Result<EDResult> {
    if cutoffs.len() < 3 {
        return Err(DickeError::InsufficientData(format!(
            "convergence scan needs at least 3 cutoffs, got {}",
            cutoffs.len()
        )));
    }
    let mut sorted = cutoffs.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut history = Vec::with_capacity(sorted.len());
    let mut last = None;
    for &c in &sorted {
        let r = solve_lowest_with(params, &basis.with_cutoff(c), opts)?;
        history.push(CutoffPoint {
            cutoff: c,
            ground_energy: r.ground_energy(),
        });
        last = Some(r);
    }
    let mut result = last.expect("at least three cutoffs");
    result.convergence_history = history;
    result.converged = result.last_relative_change().is_some_and(|d| d < tol);
    Ok(result)
}

/// Two lowest states combined into the pair that diagonalizes J_x, the
/// finite-N stand-in for the two symmetry-broken mean-field branches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryBrokenPair {
    /// E_1 − E_0
    pub splitting: f64,
    /// ⟨J_x⟩ of the two combinations, ascending
    pub jx: [f64; 2],
    pub jz: [f64; 2],
}

pub fn symmetry_broken_pair(result: &EDResult) -> Option<SymmetryBrokenPair> {
    if result.states.len() < 2 {
        return None;
    }
    let full = result.basis.with_parity(ParitySector::Both);
    let (u, v) = (&result.states[0], &result.states[1]);
    let a = jx_element(&full, u, u);
    let b = jx_element(&full, u, v);
    let d = jx_element(&full, v, v);
    // 2×2 symmetric eigenproblem
    let half_tr = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    let angle = 0.5 * (2.0 * b).atan2(a - d);
    let (c, s) = (angle.cos(), angle.sin());
    let plus: Vec<f64> = u.iter().zip(v).map(|(x, y)| c * x + s * y).collect();
    let minus: Vec<f64> = u.iter().zip(v).map(|(x, y)| -s * x + c * y).collect();
    let jz_plus = observables_of(&full, &plus).jz;
    let jz_minus = observables_of(&full, &minus).jz;
    Some(SymmetryBrokenPair {
        splitting: result.eigenvalues[1] - result.eigenvalues[0],
        jx: [half_tr - rad, half_tr + rad],
        jz: [jz_minus, jz_plus],
    })
}

/// Ground-state photon number on a coupling grid.
pub fn photon_number_scan(
    params: &ModelParams,
    g_grid: &[f64],
    basis: &BasisSpec,
    opts: &SolveOptions,
) -> Result<Vec<f64>> {
    let opts = opts.with_k(1);
    g_grid
        .par_iter()
        .map(|&g| Ok(solve_lowest_with(&params.with_g(g), basis, &opts)?.observables[0].photon_number))
        .collect()
}

/// Grid point with the largest second difference of `y`; the finite-N
/// location of the superradiant crossover when `y` is ⟨a†a⟩(g).
pub fn curvature_peak(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 3 {
        return None;
    }
    (1..x.len() - 1)
        .map(|i| {
            let (h0, h1) = (x[i] - x[i - 1], x[i + 1] - x[i]);
            let d2 = 2.0 * (h0 * y[i + 1] - (h0 + h1) * y[i] + h1 * y[i - 1]) / (h0 * h1 * (h0 + h1));
            (x[i], d2)
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(xi, _)| xi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollapsePoint {
    pub g: f64,
    pub mean_spacing: f64,
    pub mean_spacing_half_cutoff: f64,
    pub ground_energy: f64,
    pub ground_energy_half_cutoff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseReport {
    pub cutoff: usize,
    pub points: Vec<CollapsePoint>,
}

impl CollapseReport {
    /// Spacing shrinks as g grows, at the full cutoff.
    pub fn spacing_decreases_with_g(&self) -> bool {
        self.points.windows(2).all(|w| w[1].mean_spacing < w[0].mean_spacing)
    }

    /// Couplings where the ground energy still drops, by more than
    /// [`CONVERGENCE_TOL`] relative, when the cutoff doubles. Beyond ω/2 the
    /// truncated spectrum keeps sinking with the cutoff.
    pub fn unbounded_points(&self) -> Vec<f64> {
        self.points
            .iter()
            .filter(|p| p.ground_energy_half_cutoff - p.ground_energy > CONVERGENCE_TOL * p.ground_energy.abs())
            .map(|p| p.g)
            .collect()
    }
}

/// Mean spacing of the lowest `opts.k` levels across `g_grid`, at the
/// basis cutoff and at half of it.
pub fn collapse_probe(
    params: &ModelParams,
    basis: &BasisSpec,
    g_grid: &[f64],
    opts: &SolveOptions,
) -> Result<CollapseReport> {
    if opts.k < 2 {
        return Err(DickeError::InvalidParams("collapse probe needs k ≥ 2".into()));
    }
    let half = basis.with_cutoff(basis.fock_cutoff / 2);
    let points = g_grid
        .par_iter()
        .map(|&g| {
            let p = params.with_g(g);
            let full = solve_lowest_with(&p, basis, opts)?;
            let halfr = solve_lowest_with(&p, &half, opts)?;
            Ok(CollapsePoint {
                g,
                mean_spacing: full.mean_spacing().expect("k ≥ 2"),
                mean_spacing_half_cutoff: halfr.mean_spacing().expect("k ≥ 2"),
                ground_energy: full.ground_energy(),
                ground_energy_half_cutoff: halfr.ground_energy(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CollapseReport {
        cutoff: basis.fock_cutoff,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uncoupled_spectrum() {
        // ω a†a + ω_q J_z with N = 2: levels −ω_q, 0, ω − ω_q, ...
        let p = ModelParams::two_photon(1.0, 0.3, 0.0, 2);
        let b = BasisSpec::new(2, 6, ParitySector::Both);
        let r = solve_lowest(&p, &b, 3).unwrap();
        assert!((r.eigenvalues[0] + 0.3).abs() < 1e-12);
        assert!(r.eigenvalues[1].abs() < 1e-12);
        assert!((r.eigenvalues[2] - 0.3).abs() < 1e-12);
        let o = r.observables[0];
        assert!(o.photon_number.abs() < 1e-12);
        assert!((o.jz + 1.0).abs() < 1e-12);
        assert!((o.var_xa - 1.0).abs() < 1e-12);
        assert!((o.var_pa - 1.0).abs() < 1e-12);
    }

    #[test]
    fn iterative_paths_match_dense() {
        let p = ModelParams::two_photon(1.0, 0.2, 0.3, 6);
        let b = BasisSpec::new(6, 60, ParitySector::Even);
        let opts = SolveOptions::default().with_k(4);
        let d = solve_lowest_with(&p, &b, &opts.with_solver(SolverChoice::Dense)).unwrap();
        for choice in [SolverChoice::Lanczos, SolverChoice::ShiftInvert] {
            let it = solve_lowest_with(&p, &b, &opts.with_solver(choice)).unwrap();
            assert_ne!(it.solver, SolverKind::Dense);
            for (a, b) in d.eigenvalues.iter().zip(&it.eigenvalues) {
                assert!((a - b).abs() < 1e-9, "{choice:?}: {a} vs {b}");
            }
            assert!((d.observables[0].photon_number - it.observables[0].photon_number).abs() < 1e-7);
            assert!(it.residuals.iter().all(|r| *r < 1e-9));
        }
    }

    #[test]
    fn split_parity_matches_unsplit() {
        let p = ModelParams::two_photon(1.0, 0.2, 0.3, 4);
        let b = BasisSpec::new(4, 30, ParitySector::Both);
        let split = solve_lowest(&p, &b, 5).unwrap();
        // tiny g1 forces the unsplit path; its effect is second order
        let joint = solve_lowest(&p.with_g1(1e-12), &b, 5).unwrap();
        for (a, b) in split.eigenvalues.iter().zip(&joint.eigenvalues) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn curvature_peak_on_a_kink() {
        let x: Vec<f64> = (0..21).map(|i| i as f64 * 0.1).collect();
        let y: Vec<f64> = x.iter().map(|&t| if t > 1.0 { (t - 1.0) * 3.0 } else { 0.0 }).collect();
        assert_eq!(curvature_peak(&x, &y), Some(1.0));
        assert_eq!(curvature_peak(&x[..2], &y[..2]), None);
    }

    #[test]
    fn scan_needs_three_cutoffs() {
        let p = ModelParams::two_photon(1.0, 0.2, 0.3, 2);
        let b = BasisSpec::new(2, 10, ParitySector::Even);
        assert!(matches!(
            convergence_scan(&p, &b, &[10, 20], &SolveOptions::default(), CONVERGENCE_TOL),
            Err(DickeError::InsufficientData(_))
        ));
        let r = convergence_scan(&p, &b, &[20, 40, 80], &SolveOptions::default(), CONVERGENCE_TOL).unwrap();
        assert!(r.converged);
        assert!(r.variationally_monotone(1e-12));
        assert_eq!(r.cutoff_used, 80);
    }
}
