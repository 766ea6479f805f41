use serde::{Deserialize, Serialize};

/// Photon-number parity block. The two-photon coupling never connects
/// even and odd photon numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParitySector {
    Even,
    Odd,
    Both,
}

impl ParitySector {
    pub fn contains(self, n: usize) -> bool {
        match self {
            ParitySector::Even => n.is_multiple_of(2),
            ParitySector::Odd => n % 2 == 1,
            ParitySector::Both => true,
        }
    }
}

/// Dicke states |j = N/2, m⟩ ⊗ Fock states |n⟩, n ≤ `fock_cutoff`.
///
/// Full-space ordering is `m_index·(n_max + 1) + n` with
/// `m_index = m + N/2 ∈ [0, N]`. A parity sector keeps the same ordering
/// restricted to the allowed photon numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisSpec {
    pub n_qubits: usize,
    pub fock_cutoff: usize,
    pub parity: ParitySector,
}

impl BasisSpec {
    pub fn new(n_qubits: usize, fock_cutoff: usize, parity: ParitySector) -> Self {
        Self {
            n_qubits,
            fock_cutoff,
            parity,
        }
    }

    pub fn with_cutoff(self, fock_cutoff: usize) -> Self {
        Self { fock_cutoff, ..self }
    }

    pub fn with_parity(self, parity: ParitySector) -> Self {
        Self { parity, ..self }
    }

    pub fn spin_states(&self) -> usize {
        self.n_qubits + 1
    }

    /// Number of photon levels in this sector.
    pub fn photon_levels(&self) -> usize {
        let all = self.fock_cutoff + 1;
        match self.parity {
            ParitySector::Both => all,
            ParitySector::Even => all.div_ceil(2),
            ParitySector::Odd => all / 2,
        }
    }

    pub fn dim(&self) -> usize {
        self.spin_states() * self.photon_levels()
    }

    pub fn full_dim(&self) -> usize {
        self.spin_states() * (self.fock_cutoff + 1)
    }

    fn photon_slot(&self, n: usize) -> usize {
        match self.parity {
            ParitySector::Both => n,
            _ => n / 2,
        }
    }

    fn photon_at(&self, slot: usize) -> usize {
        match self.parity {
            ParitySector::Both => slot,
            ParitySector::Even => 2 * slot,
            ParitySector::Odd => 2 * slot + 1,
        }
    }

    /// Sector index of |m_index, n⟩, if the state belongs to the sector.
    pub fn index(&self, m_index: usize, n: usize) -> Option<usize> {
        if m_index > self.n_qubits || n > self.fock_cutoff || !self.parity.contains(n) {
            return None;
        }
        Some(m_index * self.photon_levels() + self.photon_slot(n))
    }

    /// (m_index, n) of a sector index.
    pub fn state(&self, i: usize) -> (usize, usize) {
        let levels = self.photon_levels();
        (i / levels, self.photon_at(i % levels))
    }

    pub fn full_index(&self, m_index: usize, n: usize) -> usize {
        m_index * (self.fock_cutoff + 1) + n
    }

    /// j = N/2
    pub fn j(&self) -> f64 {
        self.n_qubits as f64 / 2.0
    }

    /// J_z eigenvalue m of a spin index.
    pub fn m_of(&self, m_index: usize) -> f64 {
        m_index as f64 - self.j()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_blocks_partition_the_fock_index() {
        for cutoff in [0, 1, 6, 7] {
            let both = BasisSpec::new(3, cutoff, ParitySector::Both);
            let even = both.with_parity(ParitySector::Even);
            let odd = both.with_parity(ParitySector::Odd);
            assert_eq!(both.dim(), 4 * (cutoff + 1));
            assert_eq!(even.dim() + odd.dim(), both.dim());
            for sector in [even, odd, both] {
                for i in 0..sector.dim() {
                    let (m, n) = sector.state(i);
                    assert_eq!(sector.index(m, n), Some(i));
                }
            }
            assert_eq!(even.index(0, 1), None);
            assert_eq!(odd.index(0, 0), None);
        }
    }

    #[test]
    fn full_ordering_is_spin_major() {
        let b = BasisSpec::new(2, 4, ParitySector::Both);
        assert_eq!(b.full_index(0, 0), 0);
        assert_eq!(b.full_index(0, 4), 4);
        assert_eq!(b.full_index(1, 0), 5);
        assert_eq!(b.index(2, 3), Some(13));
        assert_eq!(b.m_of(0), -1.0);
    }
}
