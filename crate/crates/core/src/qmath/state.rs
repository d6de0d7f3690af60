use nalgebra::DVector;

use super::matrix::{partial_trace_matrix, ComplexMatrix, C64, ONE, ZERO};
use crate::config::Tolerances;
use crate::error::{Error, Result};

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerances(matrix, &Tolerances::default())
    }

    pub fn with_tolerances(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension("density operator must be square".into()));
        }
        if matrix.rows() > tol.max_dim {
            return Err(Error::Resource(format!(
                "density operator of dimension {} exceeds cap {}",
                matrix.rows(),
                tol.max_dim
            )));
        }
        let defect = matrix.hermiticity_defect();
        if defect > tol.hermitian {
            return Err(Error::Domain(format!(
                "operator is not Hermitian (defect {defect:.3e})"
            )));
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > tol.trace {
            return Err(Error::Domain(format!("trace {:.12} is not 1", tr.re)));
        }
        let min_eig = matrix.eigvalsh()?.first().copied().unwrap_or(0.0);
        if min_eig < -tol.psd {
            return Err(Error::Domain(format!(
                "operator is not PSD (min eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    /// Wraps an operator that is a density operator by construction (sums and
    /// products of valid states). Only the Hermitian part is kept; no
    /// eigenvalue check is made.
    pub(crate) fn from_constructed(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.is_square());
        Self {
            matrix: matrix.hermitian_part(),
        }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            matrix: ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()),
        }
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        Ok(Self::from_pure(&PureState::basis(dim, index)?))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale(1.0 / dim as f64),
        }
    }

    /// Diagonal state from a probability vector.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::diag_real(probs))
    }

    /// Convex combination Σ w_k ρ_k.
    pub fn mixture(weighted: &[(f64, &DensityOperator)]) -> Result<Self> {
        let first = weighted
            .first()
            .ok_or_else(|| Error::Invalid("empty mixture".into()))?;
        let dim = first.1.dim();
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for (w, rho) in weighted {
            if rho.dim() != dim {
                return Err(Error::Dimension("mixture of unequal dimensions".into()));
            }
            acc.axpy(*w, rho.matrix())?;
        }
        Self::new(acc)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn tensor(&self, other: &Self, tol: &Tolerances) -> Result<Self> {
        Ok(Self {
            matrix: self.matrix.kron(&other.matrix, tol)?,
        })
    }

    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<Self> {
        Ok(Self::from_constructed(partial_trace_matrix(
            &self.matrix,
            dims,
            keep,
        )?))
    }

    /// Conjugation U ρ U† by a unitary.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Result<Self> {
        let m = u.matmul(&self.matrix)?.matmul(&u.adjoint())?;
        Ok(Self::from_constructed(m))
    }

    /// Eigenvalues with the numerical-drift clamp applied.
    pub fn spectrum(&self, tol: &Tolerances) -> Result<Vec<f64>> {
        Ok(self
            .matrix
            .eigvalsh()?
            .into_iter()
            .map(|x| {
                if x < 0.0 && x >= -tol.eig_clamp {
                    0.0
                } else {
                    x
                }
            })
            .collect())
    }

    /// Whether the operator is diagonal to within `tol`.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.matrix.get(i, j).norm() <= tol))
    }

    pub fn diagonal_entries(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.matrix.get(i, i).re).collect()
    }
}

/// Unit-norm state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: DVector<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        Self::with_tolerances(amplitudes, &Tolerances::default())
    }

    pub fn with_tolerances(amplitudes: Vec<C64>, tol: &Tolerances) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Dimension("empty state vector".into()));
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Domain("non-finite amplitude".into()));
        }
        let v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if (norm - 1.0).abs() > tol.norm {
            return Err(Error::Domain(format!("state norm {norm:.12} is not 1")));
        }
        Ok(Self { amps: v })
    }

    /// Normalizes a non-zero vector.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Domain("cannot normalize a zero vector".into()));
        }
        Ok(Self {
            amps: v / C64::new(norm, 0.0),
        })
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::Dimension(format!(
                "basis index {index} >= dim {dim}"
            )));
        }
        let mut v = DVector::from_element(dim, ZERO);
        v[index] = ONE;
        Ok(Self { amps: v })
    }

    /// (|0⟩ + |1⟩)/√2.
    pub fn plus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            amps: DVector::from_vec(vec![C64::new(s, 0.0), C64::new(s, 0.0)]),
        }
    }

    /// (|0⟩ - |1⟩)/√2.
    pub fn minus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            amps: DVector::from_vec(vec![C64::new(s, 0.0), C64::new(-s, 0.0)]),
        }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn into_vector(self) -> DVector<C64> {
        self.amps
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amps.dotc(&other.amps)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            amps: self.amps.kronecker(&other.amps),
        }
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator::from_pure(self)
    }
}
