//! Thick-restart Lanczos for a few lowest eigenpairs of a real symmetric
//! operator, with full reorthogonalization.
//!
//! Converged pairs are deflated and a final pass in the orthogonal
//! complement checks that nothing lower was missed, which guards against
//! skipped members of (near-)degenerate clusters.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::error::{DickeError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOptions {
    /// residual tolerance, relative to max(1, |θ|)
    pub tol: f64,
    /// Krylov basis size before a restart
    pub max_basis: usize,
    /// total operator applications before giving up
    pub max_matvecs: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_basis: 80,
            max_matvecs: 400_000,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// true residual norms ‖H v − θ v‖
    pub residuals: Vec<f64>,
    pub matvecs: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.par_iter().with_min_len(4096).zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.par_iter_mut()
        .with_min_len(4096)
        .zip(x)
        .for_each(|(yi, xi)| *yi += alpha * xi);
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Two rounds of Gram-Schmidt against `basis`; returns the accumulated
/// coefficients.
fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut coeffs = vec![0.0; basis.len()];
    for _ in 0..2 {
        for (c, v) in coeffs.iter_mut().zip(basis) {
            let h = dot(v, w);
            axpy(-h, v, w);
            *c += h;
        }
    }
    coeffs
}

fn scale_of(theta: f64) -> f64 {
    theta.abs().max(1.0)
}

struct Pass {
    values: Vec<f64>,
    vectors: Vec<Vec<f64>>,
    residuals: Vec<f64>,
    converged: bool,
}

struct Solver<'a, F> {
    apply: &'a F,
    dim: usize,
    opts: LanczosOptions,
    matvecs: usize,
    rng: StdRng,
}

impl<F: Fn(&[f64], &mut [f64]) + Sync> Solver<'_, F> {
    fn random_unit(&mut self, locked: &[Vec<f64>]) -> Option<Vec<f64>> {
        for _ in 0..4 {
            let mut v: Vec<f64> = (0..self.dim).map(|_| self.rng.gen::<f64>() - 0.5).collect();
            orthogonalize(&mut v, locked);
            let nv = norm(&v);
            if nv > 1e-8 {
                v.iter_mut().for_each(|x| *x /= nv);
                return Some(v);
            }
        }
        None
    }

    fn apply_op(&mut self, v: &[f64]) -> Vec<f64> {
        let mut w = vec![0.0; self.dim];
        (self.apply)(v, &mut w);
        self.matvecs += 1;
        w
    }

    /// Lowest `want` pairs in the complement of `locked`.
    fn pass(&mut self, want: usize, locked: &[Vec<f64>]) -> Result<Option<Pass>> {
        let room = self.dim - locked.len();
        if room == 0 {
            return Ok(None);
        }
        let want = want.min(room);
        let max_basis = self.opts.max_basis.max(2 * want + 8).min(room);
        let Some(start) = self.random_unit(locked) else {
            return Ok(None);
        };

        let mut basis: Vec<Vec<f64>> = vec![start];
        let mut t = DMatrix::<f64>::zeros(max_basis + 1, max_basis + 1);
        // number of basis vectors whose column of T is known
        let mut done = 0usize;
        let mut last_beta;
        loop {
            // expand until the basis is full or invariant
            let mut invariant = false;
            last_beta = 0.0;
            while done < max_basis {
                let mut w = self.apply_op(&basis[done]);
                orthogonalize(&mut w, locked);
                let coeffs = orthogonalize(&mut w, &basis);
                for (i, &c) in coeffs.iter().enumerate() {
                    t[(i, done)] = c;
                    t[(done, i)] = c;
                }
                done += 1;
                let beta = norm(&w);
                last_beta = beta;
                let theta_scale = scale_of(t[(done - 1, done - 1)]);
                if beta <= 1e-12 * theta_scale || done == room {
                    invariant = true;
                    break;
                }
                w.iter_mut().for_each(|x| *x /= beta);
                basis.push(w);
                if done.is_multiple_of(10) && done >= want && self.ritz_converged(&t, done, beta, want) {
                    break;
                }
            }

            let m = done;
            let eig = SymmetricEigen::new(t.view((0, 0), (m, m)).into_owned());
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
            let estimates: Vec<f64> = order
                .iter()
                .map(|&k| (last_beta * eig.eigenvectors[(m - 1, k)]).abs())
                .collect();
            let take = want.min(m);
            let ok =
                invariant || (0..take).all(|i| estimates[i] <= self.opts.tol * scale_of(eig.eigenvalues[order[i]]));

            if ok {
                let mut values = Vec::with_capacity(take);
                let mut vectors = Vec::with_capacity(take);
                let mut residuals = Vec::with_capacity(take);
                for &k in order.iter().take(take) {
                    let theta = eig.eigenvalues[k];
                    let mut y = vec![0.0; self.dim];
                    for (i, v) in basis.iter().take(m).enumerate() {
                        axpy(eig.eigenvectors[(i, k)], v, &mut y);
                    }
                    let ny = norm(&y);
                    y.iter_mut().for_each(|x| *x /= ny);
                    let mut r = self.apply_op(&y);
                    axpy(-theta, &y, &mut r);
                    residuals.push(norm(&r));
                    values.push(theta);
                    vectors.push(y);
                }
                let converged = residuals
                    .iter()
                    .zip(&values)
                    .all(|(r, v)| *r <= self.opts.tol * scale_of(*v) * 10.0);
                return Ok(Some(Pass {
                    values,
                    vectors,
                    residuals,
                    converged,
                }));
            }

            if self.matvecs >= self.opts.max_matvecs {
                let worst = estimates.iter().take(take).copied().fold(0.0, f64::max);
                return Err(DickeError::Convergence {
                    iterations: self.matvecs,
                    max_residual: worst,
                });
            }

            // thick restart: keep the lowest Ritz vectors plus the residual
            let keep = (want + (m - want) / 2).clamp(want, m - 1);
            let residual_vec = basis.pop().expect("basis holds a residual vector");
            let mut new_basis = Vec::with_capacity(max_basis + 1);
            for &k in order.iter().take(keep) {
                let mut y = vec![0.0; self.dim];
                for (i, v) in basis.iter().take(m).enumerate() {
                    axpy(eig.eigenvectors[(i, k)], v, &mut y);
                }
                new_basis.push(y);
            }
            // re-orthonormalize the kept block against rounding drift
            for i in 0..new_basis.len() {
                let (head, tail) = new_basis.split_at_mut(i);
                orthogonalize(&mut tail[0], head);
                let n = norm(&tail[0]);
                tail[0].iter_mut().for_each(|x| *x /= n);
            }
            let mut r = residual_vec;
            orthogonalize(&mut r, &new_basis);
            let nr = norm(&r);
            r.iter_mut().for_each(|x| *x /= nr);
            t.fill(0.0);
            for (slot, &k) in order.iter().take(keep).enumerate() {
                t[(slot, slot)] = eig.eigenvalues[k];
                let s = last_beta * eig.eigenvectors[(m - 1, k)];
                t[(slot, keep)] = s;
                t[(keep, slot)] = s;
            }
            new_basis.push(r);
            basis = new_basis;
            done = keep;
        }
    }

    fn ritz_converged(&self, t: &DMatrix<f64>, m: usize, beta: f64, want: usize) -> bool {
        let eig = SymmetricEigen::new(t.view((0, 0), (m, m)).into_owned());
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        order
            .iter()
            .take(want)
            .all(|&k| (beta * eig.eigenvectors[(m - 1, k)]).abs() <= self.opts.tol * scale_of(eig.eigenvalues[k]))
    }
}

/// The `k` lowest eigenpairs of the symmetric operator `apply` on ℝ^dim,
/// ascending.
pub fn lowest_eigenpairs<F>(apply: F, dim: usize, k: usize, opts: LanczosOptions) -> Result<Eigenpairs>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    let k = k.min(dim);
    let mut solver = Solver {
        apply: &apply,
        dim,
        opts,
        matvecs: 0,
        rng: StdRng::seed_from_u64(opts.seed),
    };
    let mut values: Vec<f64> = Vec::new();
    let mut vectors: Vec<Vec<f64>> = Vec::new();
    let mut residuals: Vec<f64> = Vec::new();
    let mut stalls = 0;

    while values.len() < k {
        let Some(pass) = solver.pass(k - values.len(), &vectors)? else {
            break;
        };
        let mut accepted = 0;
        for ((v, vec), r) in pass.values.into_iter().zip(pass.vectors).zip(pass.residuals) {
            if r <= opts.tol * scale_of(v) * 10.0 {
                values.push(v);
                vectors.push(vec);
                residuals.push(r);
                accepted += 1;
            }
        }
        if accepted == 0 || !pass.converged {
            stalls += 1;
            if stalls > 8 {
                let worst = residuals.iter().copied().fold(f64::NAN, f64::max);
                return Err(DickeError::Convergence {
                    iterations: solver.matvecs,
                    max_residual: worst,
                });
            }
        }
    }

    // Verification: the lowest state orthogonal to everything found must
    // not lie below the current k-th value.
    for _ in 0..k.max(1) {
        if values.len() < k || vectors.len() >= dim {
            break;
        }
        let Some(check) = solver.pass(1, &vectors)? else { break };
        let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let (v, r) = (check.values[0], check.residuals[0]);
        if v < top - opts.tol * scale_of(top) && r <= opts.tol * scale_of(v) * 10.0 {
            values.push(v);
            vectors.push(check.vectors.into_iter().next().expect("one vector"));
            residuals.push(r);
        } else {
            break;
        }
    }

    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    order.truncate(k);
    Ok(Eigenpairs {
        values: order.iter().map(|&i| values[i]).collect(),
        residuals: order.iter().map(|&i| residuals[i]).collect(),
        vectors: order.into_iter().map(|i| std::mem::take(&mut vectors[i])).collect(),
        matvecs: solver.matvecs,
    })
}

/// Lowest Ritz value after `steps` plain Lanczos steps from a random
/// start: a cheap upper bound on the lowest eigenvalue.
pub fn ritz_upper_bound<F>(apply: F, dim: usize, steps: usize, seed: u64) -> f64
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    let mut rng = StdRng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() - 0.5).collect();
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let steps = steps.clamp(1, dim);
    let mut basis = vec![v];
    let mut t = DMatrix::<f64>::zeros(steps, steps);
    let mut m = 0;
    while m < steps {
        let mut w = vec![0.0; dim];
        apply(&basis[m], &mut w);
        let coeffs = orthogonalize(&mut w, &basis);
        for (i, &c) in coeffs.iter().enumerate() {
            t[(i, m)] = c;
            t[(m, i)] = c;
        }
        m += 1;
        let beta = norm(&w);
        if beta <= 1e-12 * scale_of(t[(m - 1, m - 1)]) {
            break;
        }
        w.iter_mut().for_each(|x| *x /= beta);
        basis.push(w);
    }
    let eig = SymmetricEigen::new(t.view((0, 0), (m, m)).into_owned());
    eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Dense reference path: full symmetric eigendecomposition.
pub fn dense_lowest(matrix: DMatrix<f64>, k: usize) -> Eigenpairs {
    let dim = matrix.nrows();
    let eig = SymmetricEigen::new(matrix.clone());
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    order.truncate(k.min(dim));
    let mut values = Vec::new();
    let mut vectors = Vec::new();
    let mut residuals = Vec::new();
    for i in order {
        let v = eig.eigenvectors.column(i).into_owned();
        let theta = eig.eigenvalues[i];
        residuals.push((&matrix * &v - &v * theta).norm());
        values.push(theta);
        vectors.push(v.as_slice().to_vec());
    }
    Eigenpairs {
        values,
        vectors,
        residuals,
        matvecs: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_op(d: Vec<f64>) -> impl Fn(&[f64], &mut [f64]) + Sync {
        move |x, y| {
            for i in 0..x.len() {
                y[i] = d[i] * x[i];
            }
        }
    }

    #[test]
    fn diagonal_spectrum() {
        let d: Vec<f64> = (0..500)
            .map(|i| (i as f64 * 0.37).sin() * 10.0 + i as f64 * 0.01)
            .collect();
        let mut sorted = d.clone();
        sorted.sort_by(f64::total_cmp);
        let out = lowest_eigenpairs(diag_op(d), 500, 5, LanczosOptions::default()).unwrap();
        for (a, b) in out.values.iter().zip(&sorted) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
        assert!(out.residuals.iter().all(|r| *r < 1e-8));
    }

    #[test]
    fn exact_degeneracy_is_resolved() {
        // 1D Laplacian shifted, with a doubled lowest level
        let mut d: Vec<f64> = (0..300).map(|i| 1.0 + i as f64).collect();
        d[7] = 1.0;
        let out = lowest_eigenpairs(diag_op(d), 300, 3, LanczosOptions::default()).unwrap();
        assert!((out.values[0] - 1.0).abs() < 1e-9);
        assert!((out.values[1] - 1.0).abs() < 1e-9);
        assert!((out.values[2] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn tridiagonal_against_dense() {
        let n = 200;
        let mut m = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 2.0 + (i as f64).cos();
            if i + 1 < n {
                m[(i, i + 1)] = -1.0;
                m[(i + 1, i)] = -1.0;
            }
        }
        let mm = m.clone();
        let op = move |x: &[f64], y: &mut [f64]| {
            let v = &mm * nalgebra::DVector::from_column_slice(x);
            y.copy_from_slice(v.as_slice());
        };
        let lan = lowest_eigenpairs(op, n, 4, LanczosOptions::default()).unwrap();
        let den = dense_lowest(m, 4);
        for (a, b) in lan.values.iter().zip(&den.values) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}
