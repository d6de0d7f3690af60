//! Numerical tolerances and resource caps used throughout the crate.

/// Every numerical threshold in one place. `Tolerances::default()` carries the
/// values the rest of the crate is tested against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max |M[i][j] - conj(M[j][i])| for an operator to count as Hermitian.
    pub hermitian: f64,
    /// Max |Tr(M) - 1| for a density operator.
    pub trace: f64,
    /// Most negative eigenvalue tolerated in a PSD operator.
    pub psd: f64,
    /// Max |‖v‖ - 1| for a pure state.
    pub norm: f64,
    /// Eigenvalues in [-clamp, 0) are set to zero before logs and square roots.
    pub eig_clamp: f64,
    /// Commutator trace norm at or below which two outputs count as commuting.
    pub commute: f64,
    /// Largest operator dimension accepted (operators are at most max_dim x max_dim).
    pub max_dim: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-12,
            trace: 1e-10,
            psd: 1e-10,
            norm: 1e-10,
            eig_clamp: 1e-10,
            commute: 1e-12,
            max_dim: 4096,
        }
    }
}

impl Tolerances {
    /// Total entry budget for a single matrix (2^24 with the default cap).
    pub fn max_entries(&self) -> usize {
        self.max_dim * self.max_dim
    }
}
