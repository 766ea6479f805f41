//! Banded Cholesky factorization for shift-invert.
//!
//! In the spin-major basis ordering the Hamiltonian is banded, with
//! half-bandwidth about the number of photon levels, so H − σ factors in
//! O(dim · b²). A failed factorization means σ is not below the spectrum,
//! which doubles as the inertia test for choosing σ.

use super::sparse::CsrMatrix;

pub struct BandedCholesky {
    dim: usize,
    band: usize,
    /// row i holds L[i][i − band ..= i], left-padded with zeros
    rows: Vec<f64>,
}

/// Largest |i − j| over stored entries.
pub fn half_bandwidth(h: &CsrMatrix) -> usize {
    (0..h.dim)
        .flat_map(|i| h.row(i).map(move |(j, _)| i.abs_diff(j)))
        .max()
        .unwrap_or(0)
}

impl BandedCholesky {
    /// Stored words for a matrix of this shape.
    pub fn storage(dim: usize, band: usize) -> usize {
        dim * (band + 1)
    }

    /// Factors H − σ I = L Lᵀ. `None` when H − σ is not positive definite.
    pub fn factor(h: &CsrMatrix, band: usize, sigma: f64) -> Option<Self> {
        let n = h.dim;
        let w = band + 1;
        let mut rows = vec![0.0; n * w];
        for i in 0..n {
            for (j, v) in h.row(i) {
                if j <= i {
                    rows[i * w + (j + band - i)] = v;
                }
            }
            rows[i * w + band] -= sigma;
        }
        for i in 0..n {
            let jlo = i.saturating_sub(band);
            for j in jlo..=i {
                // Σ_k L_ik L_jk over k ∈ [jlo, j)
                let oi = i * w + band - i;
                let oj = j * w + band - j;
                let mut s = rows[oi + j];
                for k in jlo..j {
                    s -= rows[oi + k] * rows[oj + k];
                }
                if j == i {
                    if !(s > 0.0) {
                        return None;
                    }
                    rows[oi + i] = s.sqrt();
                } else {
                    rows[oi + j] = s / rows[oj + j];
                }
            }
        }
        Some(Self { dim: n, band, rows })
    }

    /// Solves (H − σ) x = b in place.
    #[allow(clippy::needless_range_loop)]
    pub fn solve(&self, x: &mut [f64]) {
        let w = self.band + 1;
        for i in 0..self.dim {
            let o = i * w + self.band - i;
            let jlo = i.saturating_sub(self.band);
            let mut s = x[i];
            for k in jlo..i {
                s -= self.rows[o + k] * x[k];
            }
            x[i] = s / self.rows[o + i];
        }
        for i in (0..self.dim).rev() {
            let o = i * w + self.band - i;
            let jlo = i.saturating_sub(self.band);
            x[i] /= self.rows[o + i];
            let xi = x[i];
            for k in jlo..i {
                x[k] -= self.rows[o + k] * xi;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_a_tridiagonal_system() {
        let n = 50;
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![(i, 4.0 + i as f64 * 0.1)];
                if i > 0 {
                    r.push((i - 1, -1.0));
                }
                if i + 1 < n {
                    r.push((i + 1, -1.0));
                }
                r
            })
            .collect();
        let h = CsrMatrix::from_rows(rows);
        assert_eq!(half_bandwidth(&h), 1);
        let f = BandedCholesky::factor(&h, 1, 0.5).unwrap();
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let mut x = b.clone();
        f.solve(&mut x);
        let mut back = vec![0.0; n];
        h.matvec(&x, &mut back);
        for i in 0..n {
            assert!((back[i] - 0.5 * x[i] - b[i]).abs() < 1e-12);
        }
        // σ above the lowest eigenvalue is refused
        assert!(BandedCholesky::factor(&h, 1, 10.0).is_none());
    }
}
