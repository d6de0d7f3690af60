use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex matrix. Thin wrapper over `nalgebra::DMatrix` that keeps the
/// finiteness invariant and exposes the handful of operations the quantum
/// routines need.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(
                "matrix dimensions must be positive".into(),
            ));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, &entries)))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| C64::new(x, 0.0)))
            .collect();
        Self::new(r, c, entries)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(values[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    /// |a⟩⟨b| for column vectors a, b.
    pub fn outer(a: &DVector<C64>, b: &DVector<C64>) -> Self {
        Self(a * b.adjoint())
    }

    pub fn from_nalgebra(m: DMatrix<C64>) -> Self {
        Self(m)
    }

    pub fn as_nalgebra(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_nalgebra(self) -> DMatrix<C64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.0[(i, j)] = value;
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols() != other.rows() {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(Self(&self.0 * &other.0))
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.0 * v
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self(&self.0 - &other.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(&self.0 * C64::new(s, 0.0))
    }

    pub fn scale_complex(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    /// In-place `self += s * other`.
    pub fn axpy(&mut self, s: f64, other: &Self) -> Result<()> {
        self.same_shape(other)?;
        self.0.zip_apply(&other.0, |a, b| *a += b * s);
        Ok(())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest deviation from Hermiticity, max |M[i][j] - conj(M[j][i])|.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Whether every off-diagonal entry is exactly zero.
    pub fn is_diagonal_exact(&self) -> bool {
        let n = self.rows();
        self.is_square()
            && (0..n).all(|i| (0..n).all(|j| i == j || self.0[(i, j)].norm_sqr() == 0.0))
    }

    /// Real parts of the diagonal.
    pub fn real_diagonal(&self) -> Vec<f64> {
        (0..self.rows().min(self.cols()))
            .map(|i| self.0[(i, i)].re)
            .collect()
    }

    /// (M + M†)/2.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    /// Kronecker product, refused when the result would exceed the entry cap.
    pub fn kron(&self, other: &Self, tol: &Tolerances) -> Result<Self> {
        let rows = self.rows().checked_mul(other.rows());
        let cols = self.cols().checked_mul(other.cols());
        match (rows, cols) {
            (Some(r), Some(c)) if r.saturating_mul(c) <= tol.max_entries() => {
                Ok(Self(self.0.kronecker(&other.0)))
            }
            _ => Err(Error::Resource(format!(
                "tensor product of {}x{} and {}x{} exceeds the {}-entry cap",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols(),
                tol.max_entries()
            ))),
        }
    }

    /// Eigen-decomposition of a Hermitian matrix: ascending real eigenvalues
    /// and the matching orthonormal eigenvectors as columns.
    pub fn eigh(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        if !self.is_square() {
            return Err(Error::Dimension(
                "eigendecomposition needs a square matrix".into(),
            ));
        }
        let eig = SymmetricEigen::new(self.hermitian_part().0);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let n = self.rows();
        let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        Ok((values, ComplexMatrix(vectors)))
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn eigvalsh(&self) -> Result<Vec<f64>> {
        if !self.is_square() {
            return Err(Error::Dimension("eigenvalues need a square matrix".into()));
        }
        let mut vals: Vec<f64> = self
            .hermitian_part()
            .0
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        vals.sort_by(f64::total_cmp);
        Ok(vals)
    }

    /// Rebuilds V f(Λ) V† from a Hermitian eigendecomposition.
    pub fn hermitian_function(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let (vals, vecs) = self.eigh()?;
        let n = self.rows();
        let mut scaled = vecs.0.clone();
        for (j, &lambda) in vals.iter().enumerate() {
            let s = C64::new(f(lambda), 0.0);
            for i in 0..n {
                scaled[(i, j)] *= s;
            }
        }
        Ok(Self(scaled * vecs.0.adjoint()))
    }

    /// Sum of singular values.
    pub fn trace_norm(&self) -> f64 {
        self.0.clone().singular_values().iter().sum()
    }

    /// Trace norm of a Hermitian matrix (sum of |eigenvalues|).
    pub fn hermitian_trace_norm(&self) -> Result<f64> {
        Ok(self.eigvalsh()?.iter().map(|x| x.abs()).sum())
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(Error::Dimension(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(())
    }
}

/// Trace norm of the commutator AB - BA.
pub fn commutator_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let ab = a.matmul(b)?;
    let ba = b.matmul(a)?;
    // AB - BA is anti-Hermitian for Hermitian A, B; i(AB - BA) is Hermitian.
    let c = ab.sub(&ba)?.scale_complex(C64::new(0.0, 1.0));
    c.hermitian_trace_norm()
}

/// Partial trace of a square operator over the subsystems not listed in `keep`.
///
/// `dims` lists the subsystem dimensions in tensor order (first factor is the
/// most significant index). `keep` must be a non-empty set of subsystem
/// indices; the result orders the kept subsystems as they appear in `dims`.
pub fn partial_trace_matrix(
    op: &ComplexMatrix,
    dims: &[usize],
    keep: &[usize],
) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if !op.is_square() || op.rows() != total {
        return Err(Error::Dimension(format!(
            "subsystem dims {dims:?} do not match operator dimension {}",
            op.rows()
        )));
    }
    if keep.is_empty() || keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::Dimension(format!(
            "invalid kept subsystems {keep:?}"
        )));
    }
    let mut kept = vec![false; dims.len()];
    for &k in keep {
        if kept[k] {
            return Err(Error::Dimension(format!("subsystem {k} listed twice")));
        }
        kept[k] = true;
    }

    let mut strides = vec![1usize; dims.len()];
    for s in (0..dims.len().saturating_sub(1)).rev() {
        strides[s] = strides[s + 1] * dims[s + 1];
    }
    let offsets = |which: bool| -> Vec<usize> {
        let mut offs = vec![0usize];
        for (s, &d) in dims.iter().enumerate() {
            if kept[s] != which {
                continue;
            }
            let mut next = Vec::with_capacity(offs.len() * d);
            for &o in &offs {
                for digit in 0..d {
                    next.push(o + digit * strides[s]);
                }
            }
            offs = next;
        }
        offs
    };
    let kept_offsets = offsets(true);
    let traced_offsets = offsets(false);

    let m = op.as_nalgebra();
    let dk = kept_offsets.len();
    let out = DMatrix::from_fn(dk, dk, |a, b| {
        let (oa, ob) = (kept_offsets[a], kept_offsets[b]);
        traced_offsets.iter().map(|&t| m[(oa + t, ob + t)]).sum()
    });
    Ok(ComplexMatrix(out))
}
