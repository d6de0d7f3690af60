use nalgebra::{DMatrix, DVector};

use super::matrix::{ComplexMatrix, C64, ZERO};
use super::state::{DensityOperator, PureState};
use crate::config::Tolerances;
use crate::error::{Error, Result};

/// Binary entropy in bits, h₂(0) = h₂(1) = 0.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// Shannon entropy of a (possibly unnormalized) non-negative vector, bits.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// −Σ λ log₂ λ over the clamped spectrum.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    entropy_of_psd(rho.matrix(), &Tolerances::default())
}

/// Entropy of a PSD matrix treated as an (unnormalized) spectrum.
pub(crate) fn entropy_of_psd(m: &ComplexMatrix, tol: &Tolerances) -> Result<f64> {
    if m.is_diagonal_exact() {
        let vals = m.real_diagonal();
        check_psd(&[vals.iter().copied().fold(0.0, f64::min)], tol)?;
        return Ok(shannon_entropy(&vals));
    }
    let vals = m.eigvalsh()?;
    check_psd(&vals, tol)?;
    Ok(shannon_entropy(&vals))
}

fn check_psd(vals: &[f64], tol: &Tolerances) -> Result<()> {
    match vals.first() {
        Some(&min) if min < -tol.psd => Err(Error::Domain(format!(
            "operator is not PSD (min eigenvalue {min:.3e})"
        ))),
        _ => Ok(()),
    }
}

/// Eigenvalues below this multiple of machine epsilon times the trace are
/// rounding noise; their square roots would otherwise dominate the error.
const NOISE_FLOOR: f64 = 64.0 * f64::EPSILON;

fn psd_sqrt(m: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let (vals, _) = m.eigh()?;
    check_psd(&vals, tol)?;
    let floor = NOISE_FLOOR * vals.iter().map(|x| x.abs()).sum::<f64>();
    m.hermitian_function(|x| if x > floor { x.sqrt() } else { 0.0 })
}

/// Tr √(√A B √A) for PSD A, B; equals ‖√A √B‖₁. A and B need not be normalized.
pub(crate) fn root_fidelity_psd(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<f64> {
    if a.rows() != b.rows() || !a.is_square() || !b.is_square() {
        return Err(Error::Dimension(
            "fidelity needs equal square operators".into(),
        ));
    }
    if a.is_diagonal_exact() && b.is_diagonal_exact() {
        let (da, db) = (a.real_diagonal(), b.real_diagonal());
        check_psd(&[da.iter().chain(&db).copied().fold(0.0, f64::min)], tol)?;
        return Ok(da
            .iter()
            .zip(&db)
            .map(|(x, y)| (x.max(0.0) * y.max(0.0)).sqrt())
            .sum());
    }
    let sa = psd_sqrt(a, tol)?;
    let sb = psd_sqrt(b, tol)?;
    Ok(sa.matmul(&sb)?.trace_norm())
}

/// √F(ρ, σ) = ‖√ρ √σ‖₁, clamped to [0, 1].
pub fn root_fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension(format!(
            "fidelity of {}- and {}-dimensional states",
            rho.dim(),
            sigma.dim()
        )));
    }
    let r = root_fidelity_psd(rho.matrix(), sigma.matrix(), &Tolerances::default())?;
    Ok(r.clamp(0.0, 1.0))
}

/// F(ρ, σ) = ‖√ρ √σ‖₁².
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    let r = root_fidelity(rho, sigma)?;
    Ok(r * r)
}

/// ‖ρ − σ‖₁.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension(
            "trace distance of unequal dimensions".into(),
        ));
    }
    rho.matrix().sub(sigma.matrix())?.hermitian_trace_norm()
}

/// Result of an Uhlmann maximization: the local unitary and the squared
/// overlap |⟨φ|(V ⊗ I)|ψ⟩|² it achieves.
#[derive(Debug, Clone)]
pub struct Uhlmann {
    pub isometry: ComplexMatrix,
    pub overlap: f64,
}

/// Local unitary on `acting_side` of a bipartite pure state maximizing the
/// squared overlap with `phi`.
///
/// Both states live on C^{dims.0} ⊗ C^{dims.1} (first factor most
/// significant). The optimum is the polar factor of the cross-Gram matrix;
/// directions belonging to zero singular values are completed by ordered
/// Gram–Schmidt against the standard basis, so the output is deterministic.
pub fn uhlmann_isometry(
    psi: &PureState,
    phi: &PureState,
    dims: (usize, usize),
    acting_side: usize,
) -> Result<Uhlmann> {
    let (d0, d1) = dims;
    if psi.dim() != d0 * d1 || phi.dim() != d0 * d1 {
        return Err(Error::Dimension(format!(
            "bipartition {d0}x{d1} does not match state dimensions {} / {}",
            psi.dim(),
            phi.dim()
        )));
    }
    if acting_side > 1 {
        return Err(Error::Dimension(format!(
            "acting side must be 0 or 1, got {acting_side}"
        )));
    }
    let reshape = |v: &DVector<C64>| DMatrix::from_fn(d0, d1, |a, b| v[a * d1 + b]);
    let m_psi = reshape(psi.amplitudes());
    let m_phi = reshape(phi.amplitudes());

    // ⟨φ|(V⊗I)|ψ⟩ = Tr(V Mψ Mφ†);  ⟨φ|(I⊗V)|ψ⟩ = Tr(V Mψᵀ conj(Mφ)).
    let k = if acting_side == 0 {
        &m_psi * m_phi.adjoint()
    } else {
        m_psi.transpose() * m_phi.conjugate()
    };
    let d = k.nrows();
    let svd = k.svd(true, true);
    let u = svd.u.ok_or_else(|| Error::Domain("SVD failed".into()))?;
    let w = svd
        .v_t
        .ok_or_else(|| Error::Domain("SVD failed".into()))?
        .adjoint();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let total: f64 = svd.singular_values.iter().sum();
    let cutoff = 1e-12 * total.max(1e-300);
    let kept: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&j| svd.singular_values[j] > cutoff)
        .collect();

    let u_full = complete_columns(
        &kept
            .iter()
            .map(|&j| u.column(j).into_owned())
            .collect::<Vec<_>>(),
        d,
    );
    let w_full = complete_columns(
        &kept
            .iter()
            .map(|&j| w.column(j).into_owned())
            .collect::<Vec<_>>(),
        d,
    );
    let v = &w_full * u_full.adjoint();
    Ok(Uhlmann {
        isometry: ComplexMatrix::from_nalgebra(v),
        overlap: total * total,
    })
}

/// Extends orthonormal columns to a full basis using ordered Gram–Schmidt
/// against e_0, e_1, …
fn complete_columns(cols: &[DVector<C64>], dim: usize) -> DMatrix<C64> {
    let mut basis: Vec<DVector<C64>> = cols.to_vec();
    let mut e = 0;
    while basis.len() < dim && e < dim {
        let mut v = DVector::from_element(dim, ZERO);
        v[e] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&v);
                v -= b * proj;
            }
        }
        let n = v.norm();
        if n > 1e-8 {
            basis.push(v / C64::new(n, 0.0));
        }
        e += 1;
    }
    DMatrix::from_columns(&basis)
}
