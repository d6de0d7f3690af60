//! Dense complex linear algebra and the quantum-information primitives built
//! on it: tensor products, partial traces, entropies, fidelity, trace
//! distance and Uhlmann isometries.
//!
//! Square roots and logarithms of PSD operators go through a Hermitian
//! eigendecomposition; eigenvalues in `[-eig_clamp, 0)` are treated as zero.

mod info;
mod matrix;
pub mod random;
mod state;

pub use info::{
    binary_entropy, fidelity, root_fidelity, shannon_entropy, trace_distance, uhlmann_isometry,
    von_neumann_entropy, Uhlmann,
};
pub(crate) use info::{entropy_of_psd, root_fidelity_psd};
pub use matrix::{commutator_norm, partial_trace_matrix, ComplexMatrix, C64};
pub use state::{DensityOperator, PureState};

use crate::config::Tolerances;
use crate::error::Result;

/// Kronecker product of two density operators under the default cap.
pub fn tensor(a: &DensityOperator, b: &DensityOperator) -> Result<DensityOperator> {
    a.tensor(b, &Tolerances::default())
}

/// Reduced state on the `keep` subsystems.
pub fn partial_trace(
    op: &DensityOperator,
    dims: &[usize],
    keep: &[usize],
) -> Result<DensityOperator> {
    op.partial_trace(dims, keep)
}

#[cfg(test)]
mod tests;
