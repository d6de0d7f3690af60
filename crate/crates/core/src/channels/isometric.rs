use nalgebra::{DMatrix, DVector};

use super::cq::{symmetric_holevo, CqChannel};
use super::spec::ChannelFamilySpec;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::qmath::{
    entropy_of_psd, partial_trace_matrix, ComplexMatrix, DensityOperator, PureState, C64,
};

/// Isometric extension V : C^{d_in} → B ⊗ E together with the input basis in
/// which the cq channels are read off.
#[derive(Debug, Clone)]
pub struct IsometricChannel {
    dim_in: usize,
    dim_b: usize,
    dim_e: usize,
    isometry: ComplexMatrix,
    input_basis: Vec<PureState>,
    spec: Option<ChannelFamilySpec>,
}

impl IsometricChannel {
    pub fn new(
        isometry: ComplexMatrix,
        dim_b: usize,
        dim_e: usize,
        input_basis: Vec<PureState>,
    ) -> Result<Self> {
        let tol = Tolerances::default();
        let dim_in = isometry.cols();
        if isometry.rows() != dim_b * dim_e {
            return Err(Error::Dimension(format!(
                "isometry has {} rows, expected {dim_b}x{dim_e}",
                isometry.rows()
            )));
        }
        if dim_b * dim_e > tol.max_dim {
            return Err(Error::Resource(format!(
                "output dimension {} exceeds cap",
                dim_b * dim_e
            )));
        }
        let gram = isometry.adjoint().matmul(&isometry)?;
        let defect = gram.max_abs_diff(&ComplexMatrix::identity(dim_in));
        if defect > tol.norm {
            return Err(Error::Domain(format!(
                "V†V deviates from identity by {defect:.3e}"
            )));
        }
        if input_basis.len() != dim_in {
            return Err(Error::Dimension(format!(
                "input basis has {} vectors for input dimension {dim_in}",
                input_basis.len()
            )));
        }
        for (i, a) in input_basis.iter().enumerate() {
            if a.dim() != dim_in {
                return Err(Error::Dimension(
                    "input basis vector of wrong dimension".into(),
                ));
            }
            for (j, b) in input_basis.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                if (a.inner(b) - C64::new(expect, 0.0)).norm() > tol.norm {
                    return Err(Error::Domain("input basis is not orthonormal".into()));
                }
            }
        }
        Ok(Self {
            dim_in,
            dim_b,
            dim_e,
            isometry,
            input_basis,
            spec: None,
        })
    }

    pub(crate) fn with_spec(mut self, spec: ChannelFamilySpec) -> Self {
        self.spec = Some(spec);
        self
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dim_e(&self) -> usize {
        self.dim_e
    }

    pub fn isometry(&self) -> &ComplexMatrix {
        &self.isometry
    }

    pub fn input_basis(&self) -> &[PureState] {
        &self.input_basis
    }

    pub fn spec(&self) -> Option<&ChannelFamilySpec> {
        self.spec.as_ref()
    }

    /// V|ψ⟩ over B ⊗ E.
    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        if psi.dim() != self.dim_in {
            return Err(Error::Dimension("input state dimension mismatch".into()));
        }
        PureState::normalized(
            self.isometry
                .apply(psi.amplitudes())
                .iter()
                .copied()
                .collect(),
        )
    }

    /// The isometry precomposed with the input basis, so logical |x⟩ ↦ V|b_x⟩.
    /// Shape (d_B·d_E) × d_in.
    pub fn logical_isometry(&self) -> ComplexMatrix {
        let basis = DMatrix::from_columns(
            &self
                .input_basis
                .iter()
                .map(|b| b.amplitudes().clone())
                .collect::<Vec<DVector<C64>>>(),
        );
        ComplexMatrix::from_nalgebra(self.isometry.as_nalgebra() * basis)
    }

    fn joint_output(&self, x: usize) -> ComplexMatrix {
        let v = self.isometry.apply(self.input_basis[x].amplitudes());
        ComplexMatrix::outer(&v, &v)
    }

    fn marginal(&self, keep: usize) -> Result<CqChannel> {
        let dims = [self.dim_b, self.dim_e];
        let take = |x: usize| -> Result<DensityOperator> {
            let m = partial_trace_matrix(&self.joint_output(x), &dims, &[keep])?;
            DensityOperator::new(m)
        };
        CqChannel::new(take(0)?, take(1)?)
    }
}

/// ρ_x^B = Tr_E V|x⟩⟨x|V† in the stored input basis.
pub fn bob_channel(ch: &IsometricChannel) -> Result<CqChannel> {
    ch.marginal(0)
}

/// ρ_x^E = Tr_B V|x⟩⟨x|V† in the stored input basis.
pub fn eve_channel(ch: &IsometricChannel) -> Result<CqChannel> {
    ch.marginal(1)
}

/// ‖[ρ₀^E, ρ₁^E]‖₁; zero certifies a classical environment in the stored basis.
pub fn check_classical_environment(ch: &IsometricChannel) -> Result<f64> {
    eve_channel(ch)?.commutator_norm()
}

/// I(W) − I(W*).
pub fn symmetric_coherent_info(ch: &IsometricChannel) -> Result<f64> {
    Ok(symmetric_holevo(&bob_channel(ch)?)? - symmetric_holevo(&eve_channel(ch)?)?)
}

/// H(B) − H(RB) for half of a Bell state (|0⟩|b₀⟩ + |1⟩|b₁⟩)/√2 sent through V.
/// Equals [`symmetric_coherent_info`] by purity of V|b_x⟩.
pub fn coherent_info_entropic(ch: &IsometricChannel) -> Result<f64> {
    if ch.dim_in != 2 {
        return Err(Error::Dimension(
            "coherent information needs a qubit input".into(),
        ));
    }
    let tol = Tolerances::default();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let d = ch.dim_b * ch.dim_e;
    let v0 = ch.isometry.apply(ch.input_basis[0].amplitudes());
    let v1 = ch.isometry.apply(ch.input_basis[1].amplitudes());
    let mut amps = DVector::from_element(2 * d, C64::new(0.0, 0.0));
    for k in 0..d {
        amps[k] = v0[k] * s;
        amps[d + k] = v1[k] * s;
    }
    let joint = ComplexMatrix::outer(&amps, &amps);
    let dims = [2, ch.dim_b, ch.dim_e];
    let rho_b = partial_trace_matrix(&joint, &dims, &[1])?;
    let rho_rb = partial_trace_matrix(&joint, &dims, &[0, 1])?;
    Ok(entropy_of_psd(&rho_b, &tol)? - entropy_of_psd(&rho_rb, &tol)?)
}
